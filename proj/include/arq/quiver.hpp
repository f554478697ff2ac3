#pragma once

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "arq/error.hpp"
#include "arq/matrix.hpp"
#include "arq/scalar.hpp"

namespace arq {

/* Vertices are 0-based internally; text formats use 1..n and convert at the boundary. */
struct Arrow {
    std::string label;
    int src = 0, tgt = 0;
};

using DimVec = std::vector<long long>;

inline long long dim_total(const DimVec& d) {
    return std::accumulate(d.begin(), d.end(), 0LL);
}
inline DimVec dim_add(const DimVec& a, const DimVec& b) {
    ARQ_CHECK(a.size() == b.size(), "dimension vector length mismatch");
    DimVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline DimVec dim_sub(const DimVec& a, const DimVec& b) {
    ARQ_CHECK(a.size() == b.size(), "dimension vector length mismatch");
    DimVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline bool dim_leq(const DimVec& a, const DimVec& b) {
    ARQ_CHECK(a.size() == b.size(), "dimension vector length mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}
inline bool dim_is_zero(const DimVec& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x == 0; });
}
inline bool dim_sincere(const DimVec& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x > 0; });
}

struct Quiver {
    int n = 0;
    std::vector<Arrow> arrows;

    void validate() const {
        ARQ_REQUIRE(n >= 1, "quiver needs at least one vertex");
        std::set<std::string> labels;
        for (const auto& a : arrows) {
            ARQ_REQUIRE(a.src >= 0 && a.src < n && a.tgt >= 0 && a.tgt < n,
                        "arrow endpoint out of range");
            ARQ_REQUIRE(labels.insert(a.label).second, "duplicate arrow label: " + a.label);
        }
        ARQ_REQUIRE(is_acyclic(), "quiver must be acyclic");
        ARQ_REQUIRE(is_connected(), "quiver must be connected");
    }

    bool is_acyclic() const { return topo_order().size() == static_cast<size_t>(n); }

    /* Kahn's algorithm; empty result prefix when a directed cycle exists */
    std::vector<int> topo_order() const {
        std::vector<int> indeg(n, 0), order;
        for (const auto& a : arrows) ++indeg[a.tgt];
        std::priority_queue<int, std::vector<int>, std::greater<int>> q;
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) q.push(v);
        while (!q.empty()) {
            int v = q.top();
            q.pop();
            order.push_back(v);
            for (const auto& a : arrows)
                if (a.src == v && --indeg[a.tgt] == 0) q.push(a.tgt);
        }
        if (order.size() != static_cast<size_t>(n)) order.clear();
        return order;
    }

    bool is_connected() const {
        if (n == 0) return false;
        std::vector<bool> seen(n, false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& a : arrows) {
                int w = -1;
                if (a.src == v) w = a.tgt;
                else if (a.tgt == v) w = a.src;
                if (w >= 0 && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    Quiver opposite() const {
        Quiver op;
        op.n = n;
        for (const auto& a : arrows) op.arrows.push_back({a.label, a.tgt, a.src});
        return op;
    }

    /* All directed paths i -> j as arrow-index sequences, lexicographic in arrow
     * indices; includes the empty path when i == j.  Finite because acyclic. */
    std::vector<std::vector<int>> paths(int i, int j) const {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        walk(i, j, cur, out);
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    void walk(int v, int j, std::vector<int>& cur, std::vector<std::vector<int>>& out) const {
        if (v == j) out.push_back(cur);
        for (size_t k = 0; k < arrows.size(); ++k) {
            if (arrows[k].src != v) continue;
            cur.push_back(static_cast<int>(k));
            walk(arrows[k].tgt, j, cur, out);
            cur.pop_back();
        }
    }
};

/* --- Euler / Tits forms ---------------------------------------------------------- */

/* C with <d,e> = d^T C e: identity minus the arrow-count matrix */
inline Matrix<Rat> euler_matrix(const Quiver& q) {
    Matrix<Rat> c = Matrix<Rat>::identity(static_cast<size_t>(q.n));
    for (const auto& a : q.arrows)
        c.at(static_cast<size_t>(a.src), static_cast<size_t>(a.tgt)) -= Rat(1);
    return c;
}

inline long long euler_form(const Quiver& q, const DimVec& d, const DimVec& e) {
    ARQ_REQUIRE(d.size() == static_cast<size_t>(q.n) && e.size() == static_cast<size_t>(q.n),
                "dimension vector length must equal vertex count");
    long long s = 0;
    for (int v = 0; v < q.n; ++v) s += d[static_cast<size_t>(v)] * e[static_cast<size_t>(v)];
    for (const auto& a : q.arrows) s -= d[static_cast<size_t>(a.src)] * e[static_cast<size_t>(a.tgt)];
    return s;
}

inline long long tits_form(const Quiver& q, const DimVec& d) { return euler_form(q, d, d); }

enum class QuiverKind { Dynkin, ExtendedDynkin, Wild };

struct QuiverType {
    QuiverKind kind = QuiverKind::Wild;
    DimVec delta; /* null root, nonempty exactly for ExtendedDynkin */
};

inline const char* kind_name(QuiverKind k) {
    switch (k) {
        case QuiverKind::Dynkin: return "Dynkin";
        case QuiverKind::ExtendedDynkin: return "ExtendedDynkin";
        default: return "Wild";
    }
}

/* Positive (semi)definiteness of the symmetrized form via principal minors;
 * vertex counts are small so subset enumeration is cheap. */
inline QuiverType classify(const Quiver& q) {
    q.validate();
    const size_t n = static_cast<size_t>(q.n);
    Matrix<Rat> c = euler_matrix(q);
    Matrix<Rat> s = c + c.transpose();

    bool posdef = true;
    for (size_t k = 1; k <= n; ++k)
        if (!(det(s.block(0, 0, k, k)) > Rat(0))) {
            posdef = false;
            break;
        }
    if (posdef) return {QuiverKind::Dynkin, {}};

    bool psd = true;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n) && psd; ++mask) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t(1) << i)) idx.push_back(i);
        Matrix<Rat> sub(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) sub.at(i, j) = s.at(idx[i], idx[j]);
        if (det(sub) < Rat(0)) psd = false;
    }
    if (!psd) return {QuiverKind::Wild, {}};

    auto ker = kernel_basis(s);
    if (ker.size() != 1) return {QuiverKind::Wild, {}};

    /* normalize the radical generator to coprime positive integers */
    BigInt l = 1;
    for (const auto& x : ker[0]) l = lcm(l, rat_den(x));
    std::vector<BigInt> w(n);
    for (size_t i = 0; i < n; ++i) w[i] = rat_num(ker[0][i] * Rat(l));
    BigInt g = 0;
    for (const auto& x : w) g = gcd(g, x);
    ARQ_CHECK(g != 0, "zero radical generator");
    bool neg = false, pos = false;
    for (auto& x : w) {
        x /= g;
        if (x < 0) neg = true;
        if (x > 0) pos = true;
    }
    ARQ_CHECK(neg != pos, "radical generator of a connected psd quiver must have one sign");
    DimVec delta(n);
    for (size_t i = 0; i < n; ++i) {
        BigInt v = neg ? -w[i] : w[i];
        ARQ_CHECK(v > 0, "null root must be strictly positive");
        delta[i] = v.convert_to<long long>();
    }
    return {QuiverKind::ExtendedDynkin, delta};
}

inline long long defect(const Quiver& q, const DimVec& delta, const DimVec& d) {
    return euler_form(q, delta, d);
}

/* Coxeter transform on dimension vectors, pinned so that the forward direction
 * tracks tau: forward(dim X) = dim tau X for non-projective indecomposable X. */
struct CoxeterData {
    Matrix<Rat> fwd, inv;
};

inline CoxeterData coxeter_data(const Quiver& q) {
    Matrix<Rat> c = euler_matrix(q);
    Matrix<Rat> phi = -(inverse(c) * c.transpose());
    return {phi, inverse(phi)};
}

inline std::vector<long long> coxeter_apply(const Matrix<Rat>& phi, const DimVec& d) {
    std::vector<Rat> v(d.size());
    for (size_t i = 0; i < d.size(); ++i) v[i] = Rat(d[i]);
    auto w = mat_vec(phi, v);
    std::vector<long long> r(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        ARQ_CHECK(rat_den(w[i]) == 1, "Coxeter transform must be integral");
        r[i] = rat_num(w[i]).convert_to<long long>();
    }
    return r;
}

} // namespace arq
