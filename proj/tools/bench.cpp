/* Benchmark driver: exact-arithmetic bulk workloads evaluated serially and
 * through the parallel layer, cross-checked for equality and timed.  Exits
 * nonzero when the two evaluations disagree, so it doubles as a stress test. */
#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arq/basechange.hpp"
#include "arq/builders.hpp"
#include "arq/ext.hpp"
#include "arq/parallel.hpp"
#include "arq/rep.hpp"

using namespace arq;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Rep<Rat> random_rep(const Quiver& q, std::mt19937_64& rng, long long dmax) {
    std::uniform_int_distribution<long long> dim(0, dmax), entry(-3, 3);
    DimVec d(static_cast<std::size_t>(q.n));
    for (auto& v : d) v = dim(rng);
    if (dim_total(d) == 0) d[0] = 1;
    Rep<Rat> x(q, d);
    for (auto& m : x.mats)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = Rat(entry(rng));
    x.validate();
    return x;
}

Matrix<RatFunc<Rat>> random_poly_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> entry(-2, 2);
    Matrix<RatFunc<Rat>> a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            RatFunc<Rat> t = RatFunc<Rat>::t();
            a.at(r, c) = RatFunc<Rat>(entry(rng)) + RatFunc<Rat>(entry(rng)) * t +
                         RatFunc<Rat>(entry(rng)) * t * t;
        }
    return a;
}

struct EulerRow {
    long long hom = 0, ext = 0, euler = 0;
    bool operator==(const EulerRow&) const = default;
};

int euler_workload(int pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Rep<Rat>> xs, ys;
    for (int i = 0; i < pairs; ++i) {
        const Quiver q = (i % 2 == 0) ? quiver_kronecker() : quiver_d4_tilde();
        xs.push_back(random_rep(q, rng, 3));
        ys.push_back(random_rep(q, rng, 3));
    }
    auto work = [&](std::size_t i) {
        EulerRow r;
        r.hom = static_cast<long long>(hom_dim(xs[i], ys[i]));
        r.ext = static_cast<long long>(ext1_cocycle_basis(xs[i], ys[i]).size());
        r.euler = euler_form(xs[i].q, xs[i].dims, ys[i].dims);
        return r;
    };

    auto t0 = Clock::now();
    std::vector<EulerRow> serial;
    for (std::size_t i = 0; i < xs.size(); ++i) serial.push_back(work(i));
    double t_serial = ms_since(t0);

    t0 = Clock::now();
    auto par = parallel_map(xs.size(), work);
    double t_par = ms_since(t0);

    int bad = 0;
    for (std::size_t i = 0; i < par.size(); ++i) {
        if (!(par[i] == serial[i])) ++bad;
        if (par[i].hom - par[i].ext != par[i].euler) ++bad;
    }
    std::cout << "euler-identity scan: pairs=" << pairs << " serial=" << t_serial
              << "ms parallel=" << t_par << "ms mismatches=" << bad << "\n";
    return bad;
}

int snf_workload(int mats, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Matrix<RatFunc<Rat>>> as;
    for (int i = 0; i < mats; ++i) as.push_back(random_poly_matrix(4, rng));
    auto work = [&](std::size_t i) {
        SNFResult<Rat> r = snf_dvr(as[i]);
        if (!(r.p * r.d * r.q == as[i])) throw invariant_error("Smith factors do not multiply back");
        return r.exponents;
    };

    auto t0 = Clock::now();
    std::vector<std::vector<long long>> serial;
    for (std::size_t i = 0; i < as.size(); ++i) serial.push_back(work(i));
    double t_serial = ms_since(t0);

    t0 = Clock::now();
    auto par = parallel_map(as.size(), work);
    double t_par = ms_since(t0);

    int bad = 0;
    for (std::size_t i = 0; i < par.size(); ++i)
        if (par[i] != serial[i]) ++bad;
    std::cout << "local smith forms:   mats=" << mats << " serial=" << t_serial
              << "ms parallel=" << t_par << "ms mismatches=" << bad << "\n";
    return bad;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial/parallel cross-check benchmarks for the exact kernels"};
    int pairs = 60, mats = 20;
    std::uint64_t seed = 1;
    app.add_option("--pairs", pairs, "random representation pairs for the Euler scan");
    app.add_option("--mats", mats, "random polynomial matrices for the Smith-form batch");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    std::cout << "threads=" << parallel_threads() << " openmp=" << (parallel_enabled() ? "yes" : "no")
              << "\n";
    int bad = euler_workload(pairs, seed) + snf_workload(mats, seed + 1);
    if (bad != 0) {
        std::cerr << "FAIL: serial and parallel evaluations disagree\n";
        return 1;
    }
    std::cout << "OK: serial and parallel evaluations agree\n";
    return 0;
}
