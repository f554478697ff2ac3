#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <vector>

#include "arq/basechange.hpp"
#include "arq/builders.hpp"

using namespace arq;

using RF = RatFunc<Rat>;

static RF rf(const char* s) { return parse_scalar<RF>(s); }

/* the Kronecker pair (1, t) and (t, t^2): generically isomorphic modules
 * whose reductions at t = 0 differ */
static RQModule<Rat> mod_1_t() {
    RQModule<Rat> x(quiver_kronecker(), DimVec{1, 1});
    x.mats[0].at(0, 0) = rf("1");
    x.mats[1].at(0, 0) = rf("t");
    x.validate();
    return x;
}
static RQModule<Rat> mod_t_t2() {
    RQModule<Rat> y(quiver_kronecker(), DimVec{1, 1});
    y.mats[0].at(0, 0) = rf("t");
    y.mats[1].at(0, 0) = rf("t^2");
    y.validate();
    return y;
}

TEST_CASE("scalar extension preserves shape and catches non-polynomial modules") {
    ARContext<Rat> ck(quiver_kronecker());
    Rep<Rat> p1 = ck.realize(IndecDescriptor::pp(0, 0));
    Rep<RF> p1k = extend_scalars(p1);
    CHECK(p1k.dims == p1.dims);
    CHECK(extend_scalars(zero_rep<Rat>(ck.q)).is_zero_rep());

    RQModule<Rat> bad(quiver_kronecker(), DimVec{1, 1});
    bad.mats[0].at(0, 0) = rf("1/(t+1)");
    CHECK_THROWS_AS(bad.validate(), precondition_error);
}

TEST_CASE("module fibers: generic, closed, and shifted") {
    RQModule<Rat> x = mod_1_t();
    Rep<RF> gen = x.generic_fiber();
    CHECK(gen.mats[1].at(0, 0) == rf("t"));
    Rep<Rat> at0 = x.reduce_at(Rat(0));
    CHECK(at0.mats[0].at(0, 0) == Rat(1));
    CHECK(at0.mats[1].at(0, 0) == Rat(0));
    Rep<Rat> at2 = x.reduce_at(Rat(2));
    CHECK(at2.mats[1].at(0, 0) == Rat(2));
    /* shifting by a moves the fiber at (t - a) to the origin */
    Rep<Rat> sh = x.shifted(Rat(2)).reduce_at(Rat(0));
    CHECK(sh.mats[1].at(0, 0) == Rat(2));
}

TEST_CASE("constant lifts round-trip through either fiber") {
    ARContext<Rat> ck(quiver_d4_tilde());
    Rep<Rat> r = ck.realize(IndecDescriptor::reg(0, 0, 1));
    RQModule<Rat> m = constant_rqmodule(r);
    CHECK(m.reduce_at(Rat(0)) == r);
    CHECK(m.reduce_at(Rat(5)) == r);
    CHECK(m.generic_fiber().dims == r.dims);
}

TEST_CASE("scalar extension preserves descriptor identity up to twice delta") {
    ARContext<Rat> ck(quiver_d4_tilde());
    ARContext<RF> cK(quiver_d4_tilde());
    long long bound = 2 * dim_total(ck.type.delta);
    TubeBijectionReport rep = check_tube_bijection(ck, cK, bound);
    CHECK(rep.failures == 0);
    CHECK(!rep.entries.empty());
    int regulars = 0;
    for (const auto& e : rep.entries) {
        CHECK(e.indecomposable);
        CHECK(e.component_ok);
        CHECK(e.name_ok);
        if (e.desc.kind == DescKind::Reg) ++regulars;
    }
    /* all six regular simples appear within the bound */
    CHECK(regulars >= 6);

    ARContext<Rat> ca(quiver_a2_tilde());
    ARContext<RF> cA(quiver_a2_tilde());
    CHECK(check_tube_bijection(ca, cA, 2 * dim_total(ca.type.delta)).failures == 0);
}

TEST_CASE("the homogeneous simple stays indecomposable over the extension") {
    Rep<RF> h = extend_scalars(kronecker_regular<Rat>(Rat(0)));
    CHECK(decompose(h).summands.size() == 1);
    ARContext<RF> cK(quiver_kronecker());
    CHECK(cK.component_of_dims(h.dims) == Component::R);
}

TEST_CASE("iso spreading clears exactly the denominators it needs") {
    RQModule<Rat> x = mod_1_t();
    SUBCASE("identity map needs no localization") {
        RepMap<RF> id = RepMap<RF>::identity_on(x.generic_fiber());
        SpreadIso<Rat> s = spread_iso(x, x, id);
        CHECK(s.r == Poly<Rat>::one());
    }
    SUBCASE("the (1,t)/(t,t^2) pair localizes at t") {
        RQModule<Rat> y = mod_t_t2();
        RepMap<RF> f;
        f.comps.push_back(Matrix<RF>::identity(1));
        Matrix<RF> f2(1, 1);
        f2.at(0, 0) = rf("t");
        f.comps.push_back(f2);
        SpreadIso<Rat> s = spread_iso(x, y, f);
        CHECK(s.r == Poly<Rat>::x());
    }
    SUBCASE("non-invertible maps are rejected") {
        RepMap<RF> zero;
        zero.comps.push_back(Matrix<RF>(1, 1));
        zero.comps.push_back(Matrix<RF>(1, 1));
        CHECK_THROWS_AS(spread_iso(x, x, zero), precondition_error);
    }
}

static Matrix<RF> mat2(const char* a, const char* b, const char* c, const char* d) {
    Matrix<RF> m(2, 2);
    m.at(0, 0) = rf(a);
    m.at(0, 1) = rf(b);
    m.at(1, 0) = rf(c);
    m.at(1, 1) = rf(d);
    return m;
}

/* valuation of the gcd of all i-by-i minors; the classical Smith invariant */
static long long minor_val(const Matrix<RF>& a, std::size_t i) {
    long long best = -1;
    std::vector<std::size_t> rsel, csel;
    std::function<void(std::size_t, std::size_t)> pick_c = [&](std::size_t start, std::size_t left) {
        if (left == 0) {
            Matrix<RF> sub(i, i);
            for (std::size_t r = 0; r < i; ++r)
                for (std::size_t c = 0; c < i; ++c) sub.at(r, c) = a.at(rsel[r], csel[c]);
            RF d = det(sub);
            if (!arq::is_zero(d) && (best < 0 || d.val0() < best)) best = d.val0();
            return;
        }
        for (std::size_t c = start; c + left <= a.cols(); ++c) {
            csel.push_back(c);
            pick_c(c + 1, left - 1);
            csel.pop_back();
        }
    };
    std::function<void(std::size_t, std::size_t)> pick_r = [&](std::size_t start, std::size_t left) {
        if (left == 0) {
            pick_c(0, i);
            return;
        }
        for (std::size_t r = start; r + left <= a.rows(); ++r) {
            rsel.push_back(r);
            pick_r(r + 1, left - 1);
            rsel.pop_back();
        }
    };
    pick_r(0, i);
    return best;
}

TEST_CASE("Smith normal form over the local ring at t") {
    SUBCASE("identity") {
        auto s = snf_dvr(matrix_extend(Matrix<Rat>::identity(2)));
        CHECK(s.exponents == std::vector<long long>{0, 0});
    }
    SUBCASE("a unipotent mixes the diagonal") {
        auto s = snf_dvr(mat2("t", "0", "1", "t"));
        CHECK(s.exponents == std::vector<long long>{0, 2});
        CHECK(s.d.at(0, 0) == rf("1"));
        CHECK(s.d.at(1, 1) == rf("t^2"));
        CHECK(s.d.at(0, 1) == rf("0"));
        CHECK(s.d.at(1, 0) == rf("0"));
    }
    SUBCASE("already diagonal") {
        auto s = snf_dvr(mat2("t", "0", "0", "t"));
        CHECK(s.exponents == std::vector<long long>{1, 1});
    }
    SUBCASE("singular and out-of-ring inputs are rejected") {
        CHECK_THROWS_AS(snf_dvr(mat2("t", "t", "t", "t")), precondition_error);
        CHECK_THROWS_AS(snf_dvr(mat2("1/t", "0", "0", "1")), precondition_error);
    }
    SUBCASE("exponents agree with the gcd-of-minors invariants") {
        std::vector<Matrix<RF>> samples = {
            mat2("t", "0", "1", "t"),
            mat2("t^2+t", "1", "t^3", "t-1"),
            mat2("2", "t", "t", "t^2+1"),
            mat2("t^3", "t", "t^2", "t+5"),
        };
        for (const auto& a : samples) {
            auto s = snf_dvr(a);
            long long run = 0;
            for (std::size_t i = 0; i < s.exponents.size(); ++i) {
                run += s.exponents[i];
                CHECK(run == minor_val(a, i + 1));
            }
        }
    }
}

TEST_CASE("matched filtrations: trivial and rank-zero cases") {
    ARContext<Rat> ck(quiver_kronecker());
    RQModule<Rat> c = constant_rqmodule(ck.realize(IndecDescriptor::pp(0, 0)));
    MatchedFiltrations<Rat> mf =
        filtration_pair(c, c, RepMap<RF>::identity_on(c.generic_fiber()));
    CHECK(mf.m == 1);
    CHECK(mf.exponents == std::vector<long long>{0});
    REQUIRE(mf.x_factors.size() == 1);
    CHECK(mf.x_factors[0].dims == c.ranks);

    RQModule<Rat> z(quiver_kronecker(), DimVec{0, 0});
    RepMap<RF> zf;
    zf.comps.push_back(Matrix<RF>(0, 0));
    zf.comps.push_back(Matrix<RF>(0, 0));
    MatchedFiltrations<Rat> mz = filtration_pair(z, z, zf);
    CHECK(mz.m == 0);
    CHECK(mz.x_factors.empty());
    CHECK(mz.x_chain.size() == 1);
}

TEST_CASE("matched filtrations: the (1,t)/(t,t^2) pair") {
    RQModule<Rat> x = mod_1_t(), y = mod_t_t2();
    RepMap<RF> f;
    f.comps.push_back(Matrix<RF>::identity(1));
    Matrix<RF> f2(1, 1);
    f2.at(0, 0) = rf("t");
    f.comps.push_back(f2);
    MatchedFiltrations<Rat> mf = filtration_pair(x, y, f);
    CHECK(mf.m == 2);
    CHECK(mf.exponents == std::vector<long long>{0, 1});
    REQUIRE(mf.x_factors.size() == 2);
    /* factor pairs are the two vertex simples, in exponent order */
    CHECK(mf.x_factors[0].dims == DimVec{1, 0});
    CHECK(mf.x_factors[1].dims == DimVec{0, 1});
    CHECK(mf.y_factors[0].dims == DimVec{1, 0});
    CHECK(mf.y_factors[1].dims == DimVec{0, 1});
    /* chains shrink and grow one step at a time */
    CHECK(mf.x_chain[0].rep.dims == DimVec{1, 1});
    CHECK(mf.x_chain[1].rep.dims == DimVec{0, 1});
    CHECK(mf.x_chain[2].rep.dims == DimVec{0, 0});
    CHECK(mf.y_chain[0].rep.dims == DimVec{0, 0});
    CHECK(mf.y_chain[1].rep.dims == DimVec{1, 0});
    CHECK(mf.y_chain[2].rep.dims == DimVec{1, 1});
    /* the first reduction is the homogeneous module at 0, the second splits */
    CHECK(decompose(mf.x_red).summands.size() == 1);
    CHECK(decompose(mf.y_red).summands.size() == 2);

    /* the overload finds the generic isomorphism on its own */
    CHECK(filtration_pair(x, y).m == 2);
}

TEST_CASE("tau commutes with scalar extension") {
    ARContext<Rat> ck(quiver_kronecker());
    /* projective: both sides vanish */
    auto pr = check_tau_base_change(ck.realize(IndecDescriptor::pp(0, 0)));
    CHECK(pr.isomorphic);
    CHECK(dim_total(pr.lhs_dims) == 0);
    /* homogeneous regular: fixed by tau on both sides */
    auto hr = check_tau_base_change(kronecker_regular<Rat>(Rat(0)));
    CHECK(hr.isomorphic);
    CHECK(hr.lhs_dims == DimVec{1, 1});
    /* preprojective shift: tau of (3,4) is (1,2) */
    auto pp = check_tau_base_change(ck.realize(IndecDescriptor::pp(0, 1)));
    CHECK(pp.isomorphic);
    CHECK(pp.lhs_dims == DimVec{1, 2});
    CHECK(pp.rhs_dims == DimVec{1, 2});
    /* every small Kronecker indecomposable passes */
    for (const auto& d : ck.descriptors_up_to(6))
        CHECK(check_tau_base_change(ck.realize(d)).isomorphic);
}

TEST_CASE("handle restriction lifts descriptors verbatim and points functorially") {
    ARContext<Rat> ck(quiver_kronecker());
    ARContext<RF> cK(quiver_kronecker());
    PrimeLabel<Rat> p0 = PrimeLabel<Rat>::closed(Rat(0));

    TorsionHandle ff = parse_handle("FF([PP(1,0),PP(2,1)];supp=[])");
    CHECK(r_pq(ck, cK, ff, p0).str() == ff.str());

    TorsionHandle up = parse_handle("Upper(I)" );
    CHECK(r_pq(ck, cK, up, p0).str() == "Upper(I)");

    /* the lambda = 0 point over k is labeled t; over k(t) the same module is
     * the x = 0 point of the new parameterization */
    TorsionHandle pts = parse_handle("Upper(I;points=[t])");
    CHECK(r_pq(ck, cK, pts, p0).str() == "Upper(I;points=[x])");

    CHECK_THROWS_AS(r_pq(ck, cK, ff, PrimeLabel<Rat>::generic_label()), precondition_error);

    /* lifted membership matches on discrete descriptors */
    TorsionHandle lifted = r_pq(ck, cK, ff, p0);
    for (const auto& d : ck.descriptors_up_to(5)) {
        bool at_p = handle_membership(ck, ff, ck.realize(d));
        bool at_q = handle_membership(cK, lifted, cK.realize(d));
        std::string which = d.str();
        CAPTURE(which);
        CHECK(at_p == at_q);
    }
}

TEST_CASE("handle restriction embeds the exchange fragment") {
    ARContext<Rat> ck(quiver_kronecker());
    ARContext<RF> cK(quiver_kronecker());
    PrimeLabel<Rat> p0 = PrimeLabel<Rat>::closed(Rat(0));
    PosetFragment pf = enumerate_ftors(ck, 3);
    std::vector<TorsionHandle> lifted;
    for (const auto& h : pf.nodes) lifted.push_back(r_pq(ck, cK, h, p0));
    /* injective on the fragment */
    for (std::size_t i = 0; i < lifted.size(); ++i)
        for (std::size_t j = i + 1; j < lifted.size(); ++j)
            CHECK(lifted[i].str() != lifted[j].str());
    /* order-preserving in both directions */
    for (std::size_t i = 0; i < lifted.size(); ++i)
        for (std::size_t j = 0; j < lifted.size(); ++j) {
            bool low = ff_handle_leq(ck, pf.nodes[i], pf.nodes[j]);
            bool high = ff_handle_leq(cK, lifted[i], lifted[j]);
            CHECK(low == high);
        }
    /* non-functorially-finite handles stay non-functorially-finite */
    TorsionHandle up = r_pq(ck, cK, parse_handle("Upper(I)"), p0);
    CHECK_FALSE(is_functorially_finite(cK, up).functorially_finite);
}
