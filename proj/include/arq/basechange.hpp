/* ------------------------------------------------------------------------- */
/* Base change along k -> k[t] -> k(t).                                      */
/*                                                                           */
/* The central objects are RQModules: representations of the quiver over the */
/* polynomial ring k[t], free of finite rank.  Inverting t gives the generic */
/* fiber over k(t); evaluating t = a gives the closed fiber at (t - a).      */
/* The local ring at the origin k[t]_(t) is a discrete valuation ring with   */
/* uniformizer t, and an exact Smith normal form over it drives the matched  */
/* filtration construction: two t-free modules with isomorphic generic       */
/* fibers have reductions admitting filtrations with pairwise isomorphic     */
/* factors in reversed order.                                                */
/* ------------------------------------------------------------------------- */
#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arq/ar.hpp"
#include "arq/descriptor.hpp"
#include "arq/error.hpp"
#include "arq/fitting.hpp"
#include "arq/matrix.hpp"
#include "arq/poly.hpp"
#include "arq/rep.hpp"
#include "arq/torsion.hpp"
#include "arq/translate.hpp"

namespace arq {

/* ---------------------------------------------------------------- *
 *  scalar extension
 * ---------------------------------------------------------------- */

template <FieldLike K>
Matrix<RatFunc<K>> matrix_extend(const Matrix<K>& m) {
    Matrix<RatFunc<K>> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = RatFunc<K>::constant(m.at(r, c));
    return out;
}

/* view a representation over k as a representation over k(t): the matrices
 * are unchanged, read as constant rational functions */
template <FieldLike K>
Rep<RatFunc<K>> extend_scalars(const Rep<K>& x) {
    Rep<RatFunc<K>> out(x.q, x.dims);
    for (std::size_t a = 0; a < x.mats.size(); ++a) out.mats[a] = matrix_extend(x.mats[a]);
    out.validate();
    return out;
}

template <FieldLike K>
RepMap<RatFunc<K>> extend_scalars_map(const RepMap<K>& f) {
    RepMap<RatFunc<K>> out;
    for (const auto& c : f.comps) out.comps.push_back(matrix_extend(c));
    return out;
}

/* ---------------------------------------------------------------- *
 *  modules over k[t]
 * ---------------------------------------------------------------- */

template <FieldLike K>
Matrix<K> matrix_eval(const Matrix<RatFunc<K>>& m, const K& a) {
    Matrix<K> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = m.at(r, c).eval(a);
    return out;
}

/* p(t) -> p(t + a), used to move a closed point (t - a) to the origin */
template <FieldLike K>
Poly<K> poly_shift_var(const Poly<K>& p, const K& a) {
    Poly<K> res;
    Poly<K> lin = Poly<K>::x() + Poly<K>(a);
    for (long long i = p.degree(); i >= 0; --i) res = res * lin + Poly<K>(p.coeff(i));
    return res;
}

template <FieldLike K>
RatFunc<K> ratfunc_shift_var(const RatFunc<K>& f, const K& a) {
    return RatFunc<K>(poly_shift_var(f.num, a), poly_shift_var(f.den, a));
}

/* A representation of the quiver with free k[t]-modules at the vertices:
 * matrices carry polynomial entries in the distinguished variable t. */
template <FieldLike K>
struct RQModule {
    Quiver q;
    DimVec ranks;
    std::vector<Matrix<RatFunc<K>>> mats;

    RQModule() = default;
    RQModule(Quiver quiver, DimVec r) : q(std::move(quiver)), ranks(std::move(r)) {
        for (const auto& ar : q.arrows)
            mats.push_back(Matrix<RatFunc<K>>(
                static_cast<std::size_t>(ranks[static_cast<std::size_t>(ar.tgt)]),
                static_cast<std::size_t>(ranks[static_cast<std::size_t>(ar.src)])));
    }

    void validate() const {
        q.validate();
        ARQ_REQUIRE(static_cast<int>(ranks.size()) == q.n, "rank vector length mismatch");
        for (long long r : ranks) ARQ_REQUIRE(r >= 0, "ranks must be nonnegative");
        ARQ_REQUIRE(mats.size() == q.arrows.size(), "one matrix per arrow required");
        for (std::size_t a = 0; a < mats.size(); ++a) {
            ARQ_REQUIRE(mats[a].rows() ==
                                static_cast<std::size_t>(ranks[static_cast<std::size_t>(q.arrows[a].tgt)]) &&
                            mats[a].cols() ==
                                static_cast<std::size_t>(ranks[static_cast<std::size_t>(q.arrows[a].src)]),
                        "matrix shape does not match the rank vector");
            for (std::size_t r = 0; r < mats[a].rows(); ++r)
                for (std::size_t c = 0; c < mats[a].cols(); ++c)
                    ARQ_REQUIRE(mats[a].at(r, c).den.degree() == 0,
                                "module entries must be polynomials in t");
        }
    }

    /* invert t: the same matrices over the fraction field k(t) */
    Rep<RatFunc<K>> generic_fiber() const {
        Rep<RatFunc<K>> x(q, ranks);
        x.mats = mats;
        x.validate();
        return x;
    }

    /* closed fiber at the rational point (t - a) */
    Rep<K> reduce_at(const K& a) const {
        Rep<K> x(q, ranks);
        for (std::size_t i = 0; i < mats.size(); ++i) x.mats[i] = matrix_eval(mats[i], a);
        x.validate();
        return x;
    }

    /* substitute t -> t + a, moving the closed point (t - a) to the origin */
    RQModule shifted(const K& a) const {
        RQModule out = *this;
        for (auto& m : out.mats)
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    m.at(r, c) = ratfunc_shift_var(m.at(r, c), a);
        return out;
    }
};

/* the constant lift: every entry of the k-representation read into k[t] */
template <FieldLike K>
RQModule<K> constant_rqmodule(const Rep<K>& x) {
    RQModule<K> m(x.q, x.dims);
    for (std::size_t a = 0; a < x.mats.size(); ++a) m.mats[a] = matrix_extend(x.mats[a]);
    m.validate();
    return m;
}

/* reinterpret a representation over k(t) with polynomial entries */
template <FieldLike K>
RQModule<K> rqmodule_from_rep(const Rep<RatFunc<K>>& x) {
    RQModule<K> m(x.q, x.dims);
    m.mats = x.mats;
    m.validate();
    return m;
}

/* ---------------------------------------------------------------- *
 *  tube bijection report: k -> k(t) preserves descriptor identity
 * ---------------------------------------------------------------- */

struct TubeBijectionEntry {
    IndecDescriptor desc;
    bool indecomposable = false;
    bool component_ok = false;
    bool name_ok = false;
};

struct TubeBijectionReport {
    long long bound = 0;
    std::vector<TubeBijectionEntry> entries;
    int failures = 0;
};

template <FieldLike K>
TubeBijectionReport check_tube_bijection(ARContext<K>& ck, ARContext<RatFunc<K>>& cK,
                                         long long bound) {
    ck.require_extended();
    ARQ_REQUIRE(ck.q.n == cK.q.n && ck.q.arrows.size() == cK.q.arrows.size(),
                "both contexts must present the same quiver");
    TubeBijectionReport rep;
    rep.bound = bound;
    for (const auto& d : ck.descriptors_up_to(bound)) {
        TubeBijectionEntry e;
        e.desc = d;
        Rep<RatFunc<K>> xK = extend_scalars(ck.realize(d));
        e.indecomposable = decompose(xK).summands.size() == 1;
        Component want = d.kind == DescKind::PP  ? Component::P
                         : d.kind == DescKind::PI ? Component::I
                                                  : Component::R;
        e.component_ok = cK.component_of_dims(xK.dims) == want;
        e.name_ok = e.indecomposable && cK.describe(xK).str() == d.str();
        if (!(e.indecomposable && e.component_ok && e.name_ok)) ++rep.failures;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

/* ---------------------------------------------------------------- *
 *  iso spreading: clear denominators of a generic isomorphism
 * ---------------------------------------------------------------- */

template <FieldLike K>
struct SpreadIso {
    Poly<K> r;                  /* X_r ~= Y_r after inverting r */
    RepMap<RatFunc<K>> f_cleared; /* r1 * f, polynomial entries */
    RepMap<RatFunc<K>> g_cleared; /* r2 * f^{-1}, polynomial entries */
};

namespace detail {

template <FieldLike K>
Poly<K> lcm_denominators(const RepMap<RatFunc<K>>& f) {
    Poly<K> l = Poly<K>::one();
    for (const auto& m : f.comps)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const Poly<K>& d = m.at(r, c).den;
                Poly<K> g = poly_gcd(l, d);
                auto [quot, rem] = poly_divmod(d, g);
                ARQ_CHECK(rem.is_zero(), "gcd must divide");
                l = (l * quot).monic();
            }
    return l;
}

template <FieldLike K>
RepMap<RatFunc<K>> scale_map(const RepMap<RatFunc<K>>& f, const Poly<K>& s) {
    RepMap<RatFunc<K>> out = f;
    RatFunc<K> sf{s, Poly<K>::one()};
    for (auto& m : out.comps)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = m.at(r, c) * sf;
    return out;
}

template <FieldLike K>
bool map_is_polynomial(const RepMap<RatFunc<K>>& f) {
    for (const auto& m : f.comps)
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (m.at(r, c).den.degree() != 0) return false;
    return true;
}

}  // namespace detail

/* Given a generic isomorphism f between the fraction-field fibers, produce
 * r in k[t] such that f and its inverse become mutually inverse module maps
 * after inverting r.  r is the product of the denominator lcms of f and
 * f^{-1}; the cancellation identities (r1 f)(r2 g) = r and (r2 g)(r1 f) = r
 * are checked exactly. */
template <FieldLike K>
SpreadIso<K> spread_iso(const RQModule<K>& x, const RQModule<K>& y,
                        const RepMap<RatFunc<K>>& f) {
    x.validate();
    y.validate();
    Rep<RatFunc<K>> xk = x.generic_fiber(), yk = y.generic_fiber();
    ARQ_REQUIRE(f.comps.size() == static_cast<std::size_t>(x.q.n),
                "one matrix per vertex required");
    ARQ_REQUIRE(f.intertwines(xk, yk), "the map is not a homomorphism of generic fibers");
    RepMap<RatFunc<K>> g;
    for (int v = 0; v < x.q.n; ++v) {
        auto inv = try_inverse(f.comps[static_cast<std::size_t>(v)]);
        ARQ_REQUIRE(inv.has_value(), "the map is not invertible over the fraction field");
        g.comps.push_back(std::move(*inv));
    }
    SpreadIso<K> out;
    Poly<K> r1 = detail::lcm_denominators(f);
    Poly<K> r2 = detail::lcm_denominators(g);
    out.r = (r1 * r2).monic();
    out.f_cleared = detail::scale_map(f, r1);
    out.g_cleared = detail::scale_map(g, r2);
    ARQ_CHECK(detail::map_is_polynomial(out.f_cleared) && detail::map_is_polynomial(out.g_cleared),
              "cleared maps must be defined over the polynomial ring");
    RatFunc<K> rr{out.r, Poly<K>::one()};
    for (int v = 0; v < x.q.n; ++v) {
        std::size_t n = out.f_cleared.comps[static_cast<std::size_t>(v)].cols();
        Matrix<RatFunc<K>> gf = out.g_cleared.comps[static_cast<std::size_t>(v)] *
                                out.f_cleared.comps[static_cast<std::size_t>(v)];
        Matrix<RatFunc<K>> fg = out.f_cleared.comps[static_cast<std::size_t>(v)] *
                                out.g_cleared.comps[static_cast<std::size_t>(v)];
        Matrix<RatFunc<K>> idx = Matrix<RatFunc<K>>::identity(n);
        Matrix<RatFunc<K>> idy = Matrix<RatFunc<K>>::identity(fg.rows());
        for (std::size_t i = 0; i < n; ++i) idx.at(i, i) = rr;
        for (std::size_t i = 0; i < fg.rows(); ++i) idy.at(i, i) = rr;
        ARQ_CHECK(gf == idx && fg == idy, "cancellation certificate failed");
    }
    return out;
}

/* ---------------------------------------------------------------- *
 *  Smith normal form over the valuation ring k[t]_(t)
 * ---------------------------------------------------------------- */

template <FieldLike K>
struct SNFResult {
    Matrix<RatFunc<K>> p, d, q; /* a = p d q, with p, q invertible locally */
    std::vector<long long> exponents;
};

template <FieldLike K>
SNFResult<K> snf_dvr(const Matrix<RatFunc<K>>& a) {
    const std::size_t n = a.rows();
    ARQ_REQUIRE(a.cols() == n, "Smith normal form expects a square matrix");
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            ARQ_REQUIRE(a.at(r, c).in_dvr(), "entry has a pole at t = 0");

    Matrix<RatFunc<K>> m = a;
    Matrix<RatFunc<K>> l = Matrix<RatFunc<K>>::identity(n);
    Matrix<RatFunc<K>> rt = Matrix<RatFunc<K>>::identity(n);
    /* invariant: m = l * a * rt throughout */
    auto swap_rows = [&](Matrix<RatFunc<K>>& mm, std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < mm.cols(); ++c) std::swap(mm.at(i, c), mm.at(j, c));
    };
    auto swap_cols = [&](Matrix<RatFunc<K>>& mm, std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < mm.rows(); ++r) std::swap(mm.at(r, i), mm.at(r, j));
    };
    for (std::size_t k = 0; k < n; ++k) {
        /* pivot: entry of minimal valuation in the remaining block */
        long best = -1;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (arq::is_zero(m.at(i, j))) continue;
                long v = m.at(i, j).val0();
                if (best < 0 || v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        ARQ_REQUIRE(best >= 0, "matrix is singular over the fraction field");
        if (bi != k) {
            swap_rows(m, k, bi);
            swap_rows(l, k, bi);
        }
        if (bj != k) {
            swap_cols(m, k, bj);
            swap_cols(rt, k, bj);
        }
        /* normalize the pivot to t^v by dividing its row by the unit part */
        Poly<K> tv = poly_pow(Poly<K>::x(), best);
        RatFunc<K> unit = m.at(k, k) / RatFunc<K>{tv, Poly<K>::one()};
        for (std::size_t c = 0; c < n; ++c) {
            m.at(k, c) = m.at(k, c) / unit;
            l.at(k, c) = l.at(k, c) / unit;
        }
        /* clear the pivot column and row; quotients stay in the local ring */
        for (std::size_t i = k + 1; i < n; ++i) {
            if (arq::is_zero(m.at(i, k))) continue;
            RatFunc<K> f = m.at(i, k) / m.at(k, k);
            ARQ_CHECK(f.in_dvr(), "row elimination left the local ring");
            for (std::size_t c = 0; c < n; ++c) {
                m.at(i, c) = m.at(i, c) - f * m.at(k, c);
                l.at(i, c) = l.at(i, c) - f * l.at(k, c);
            }
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (arq::is_zero(m.at(k, j))) continue;
            RatFunc<K> f = m.at(k, j) / m.at(k, k);
            ARQ_CHECK(f.in_dvr(), "column elimination left the local ring");
            for (std::size_t r = 0; r < n; ++r) {
                m.at(r, j) = m.at(r, j) - f * m.at(r, k);
                rt.at(r, j) = rt.at(r, j) - f * rt.at(r, k);
            }
        }
    }
    SNFResult<K> out;
    out.d = m;
    for (std::size_t k = 0; k < n; ++k) out.exponents.push_back(m.at(k, k).val0());
    ARQ_CHECK(std::is_sorted(out.exponents.begin(), out.exponents.end()),
              "diagonal exponents must ascend");
    auto pinv = try_inverse(l);
    auto qinv = try_inverse(rt);
    ARQ_CHECK(pinv.has_value() && qinv.has_value(), "transforms must be invertible");
    out.p = std::move(*pinv);
    out.q = std::move(*qinv);
    ARQ_CHECK(out.p * out.d * out.q == a, "Smith factorization must reproduce the input");
    ARQ_CHECK(det(out.p).val0() == 0 && det(out.q).val0() == 0,
              "transforms must be invertible over the local ring");
    return out;
}

/* ---------------------------------------------------------------- *
 *  matched filtrations of the two reductions
 * ---------------------------------------------------------------- */

template <FieldLike K>
struct MatchedFiltrations {
    int m = 0;                          /* number of factors */
    std::vector<long long> exponents;   /* distinct diagonal exponents, ascending */
    Rep<K> x_red, y_red;                /* reductions at t = 0 in adapted bases */
    RepMap<K> x_adapt, y_adapt;         /* isos onto the plain reductions */
    std::vector<SubRep<K>> x_chain;     /* descending: X^0 = all, ..., X^m = 0 */
    std::vector<SubRep<K>> y_chain;     /* ascending:  Y^0 = 0, ..., Y^m = all */
    std::vector<Rep<K>> x_factors, y_factors;
    std::vector<RepMap<K>> factor_isos; /* x_factors[i] -> y_factors[i] */
};

/* Implements the matched-filtration construction: per vertex, the generic
 * isomorphism A = P D Q is put into Smith form over the valuation ring; in
 * the adapted bases the reduced actions are exponent-triangular in opposite
 * directions with equal diagonal blocks, so grading the bases by exponent
 * yields a descending chain on one side, an ascending chain on the other,
 * and literally equal factors. */
template <FieldLike K>
MatchedFiltrations<K> filtration_pair(const RQModule<K>& x, const RQModule<K>& y,
                                      const RepMap<RatFunc<K>>& f) {
    x.validate();
    y.validate();
    const int n = x.q.n;
    ARQ_REQUIRE(y.q.n == n && y.q.arrows.size() == x.q.arrows.size(),
                "modules must share the quiver");
    ARQ_REQUIRE(x.ranks == y.ranks, "generically isomorphic modules must have equal ranks");
    Rep<RatFunc<K>> xk = x.generic_fiber(), yk = y.generic_fiber();
    ARQ_REQUIRE(f.comps.size() == static_cast<std::size_t>(n), "one matrix per vertex required");
    ARQ_REQUIRE(f.intertwines(xk, yk), "the map is not a homomorphism of generic fibers");

    std::vector<Matrix<RatFunc<K>>> pmat(static_cast<std::size_t>(n)),
        pinv(static_cast<std::size_t>(n)), qmat(static_cast<std::size_t>(n)),
        qinv(static_cast<std::size_t>(n));
    std::vector<std::vector<long long>> expo(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const Matrix<RatFunc<K>>& av = f.comps[static_cast<std::size_t>(v)];
        /* scale into the valuation ring so that Smith form applies, then
         * shift the exponents back */
        long shift = 0;
        for (std::size_t r = 0; r < av.rows(); ++r)
            for (std::size_t c = 0; c < av.cols(); ++c)
                if (!arq::is_zero(av.at(r, c))) shift = std::min(shift, av.at(r, c).val0());
        Matrix<RatFunc<K>> scaled = av;
        if (shift < 0) {
            RatFunc<K> s{poly_pow(Poly<K>::x(), -shift), Poly<K>::one()};
            for (std::size_t r = 0; r < scaled.rows(); ++r)
                for (std::size_t c = 0; c < scaled.cols(); ++c)
                    scaled.at(r, c) = scaled.at(r, c) * s;
        }
        if (av.rows() == 0) {
            pmat[static_cast<std::size_t>(v)] = pinv[static_cast<std::size_t>(v)] =
                qmat[static_cast<std::size_t>(v)] = qinv[static_cast<std::size_t>(v)] = av;
            continue;
        }
        auto snf = snf_dvr(scaled);
        pmat[static_cast<std::size_t>(v)] = snf.p;
        qmat[static_cast<std::size_t>(v)] = snf.q;
        auto pi = try_inverse(snf.p);
        auto qi = try_inverse(snf.q);
        ARQ_CHECK(pi && qi, "Smith transforms must be invertible");
        pinv[static_cast<std::size_t>(v)] = std::move(*pi);
        qinv[static_cast<std::size_t>(v)] = std::move(*qi);
        for (long long e : snf.exponents) expo[static_cast<std::size_t>(v)].push_back(e + shift);
    }

    /* adapted action matrices: M' = Q X Q^{-1}, N' = P^{-1} Y P */
    std::vector<Matrix<RatFunc<K>>> madj, nadj;
    for (std::size_t a = 0; a < x.q.arrows.size(); ++a) {
        int s = x.q.arrows[a].src, t = x.q.arrows[a].tgt;
        madj.push_back(qmat[static_cast<std::size_t>(t)] * x.mats[a] *
                       qinv[static_cast<std::size_t>(s)]);
        nadj.push_back(pinv[static_cast<std::size_t>(t)] * y.mats[a] *
                       pmat[static_cast<std::size_t>(s)]);
        /* exponent compatibility: t^{e_r} M'_{rc} = t^{e_c} N'_{rc} */
        for (std::size_t r = 0; r < madj[a].rows(); ++r)
            for (std::size_t c = 0; c < madj[a].cols(); ++c) {
                long long er = expo[static_cast<std::size_t>(t)][r];
                long long ec = expo[static_cast<std::size_t>(s)][c];
                const RatFunc<K>& me = madj[a].at(r, c);
                const RatFunc<K>& ne = nadj[a].at(r, c);
                ARQ_CHECK(me.in_dvr() && ne.in_dvr(),
                          "adapted actions must stay in the local ring");
                if (er < ec)
                    ARQ_CHECK(arq::is_zero(me) || me.val0() >= 1,
                              "upper block of the first action must vanish at t = 0");
                if (er > ec)
                    ARQ_CHECK(arq::is_zero(ne) || ne.val0() >= 1,
                              "lower block of the second action must vanish at t = 0");
                if (er == ec) ARQ_CHECK(me == ne, "equal-exponent blocks must agree exactly");
            }
    }

    MatchedFiltrations<K> out;
    out.x_red = Rep<K>(x.q, x.ranks);
    out.y_red = Rep<K>(x.q, x.ranks);
    for (std::size_t a = 0; a < madj.size(); ++a) {
        out.x_red.mats[a] = matrix_eval(madj[a], field_traits<K>::zero());
        out.y_red.mats[a] = matrix_eval(nadj[a], field_traits<K>::zero());
    }
    out.x_red.validate();
    out.y_red.validate();
    /* isos onto the plain reductions: plain = Q^{-1} adapted, resp. P adapted */
    Rep<K> x_plain = x.reduce_at(field_traits<K>::zero());
    Rep<K> y_plain = y.reduce_at(field_traits<K>::zero());
    for (int v = 0; v < n; ++v) {
        out.x_adapt.comps.push_back(matrix_eval(qinv[static_cast<std::size_t>(v)],
                                                field_traits<K>::zero()));
        out.y_adapt.comps.push_back(matrix_eval(pmat[static_cast<std::size_t>(v)],
                                                field_traits<K>::zero()));
    }
    ARQ_CHECK(out.x_adapt.intertwines(out.x_red, x_plain) && out.x_adapt.is_invertible(),
              "adapted basis change must identify the reductions");
    ARQ_CHECK(out.y_adapt.intertwines(out.y_red, y_plain) && out.y_adapt.is_invertible(),
              "adapted basis change must identify the reductions");

    std::set<long long> eset;
    for (int v = 0; v < n; ++v)
        for (long long e : expo[static_cast<std::size_t>(v)]) eset.insert(e);
    out.exponents.assign(eset.begin(), eset.end());
    out.m = static_cast<int>(out.exponents.size());

    auto span_where = [&](const Rep<K>& amb, auto&& keep) {
        std::vector<Matrix<K>> spans;
        for (int v = 0; v < n; ++v) {
            const auto& ev = expo[static_cast<std::size_t>(v)];
            std::vector<std::size_t> cols;
            for (std::size_t i = 0; i < ev.size(); ++i)
                if (keep(ev[i])) cols.push_back(i);
            Matrix<K> sp(amb.dim(v), cols.size());
            for (std::size_t i = 0; i < cols.size(); ++i)
                sp.at(cols[i], i) = field_traits<K>::one();
            spans.push_back(std::move(sp));
        }
        return spans;
    };
    /* X^i keeps exponents strictly above the i-th value (X^0 = everything),
     * Y^i keeps exponents up to the i-th value (Y^0 = zero) */
    for (int i = 0; i <= out.m; ++i) {
        long long cut = i == 0 ? std::numeric_limits<long long>::min()
                               : out.exponents[static_cast<std::size_t>(i - 1)];
        out.x_chain.push_back(sub_rep_from_spans(
            out.x_red, span_where(out.x_red, [&](long long e) { return e > cut; })));
        out.y_chain.push_back(sub_rep_from_spans(
            out.y_red, span_where(out.y_red, [&](long long e) { return i > 0 && e <= cut; })));
    }

    for (int i = 0; i < out.m; ++i) {
        long long e = out.exponents[static_cast<std::size_t>(i)];
        DimVec fd(static_cast<std::size_t>(n), 0);
        std::vector<std::vector<std::size_t>> idx(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            const auto& ev = expo[static_cast<std::size_t>(v)];
            for (std::size_t j = 0; j < ev.size(); ++j)
                if (ev[j] == e) idx[static_cast<std::size_t>(v)].push_back(j);
            fd[static_cast<std::size_t>(v)] =
                static_cast<long long>(idx[static_cast<std::size_t>(v)].size());
        }
        Rep<K> fx(x.q, fd), fy(x.q, fd);
        for (std::size_t a = 0; a < x.q.arrows.size(); ++a) {
            int s = x.q.arrows[a].src, t = x.q.arrows[a].tgt;
            const auto& ridx = idx[static_cast<std::size_t>(t)];
            const auto& cidx = idx[static_cast<std::size_t>(s)];
            for (std::size_t r = 0; r < ridx.size(); ++r)
                for (std::size_t c = 0; c < cidx.size(); ++c) {
                    fx.mats[a].at(r, c) = out.x_red.mats[a].at(ridx[r], cidx[c]);
                    fy.mats[a].at(r, c) = out.y_red.mats[a].at(ridx[r], cidx[c]);
                }
        }
        fx.validate();
        fy.validate();
        ARQ_CHECK(fx == fy, "matched factors must coincide in the adapted bases");
        RepMap<K> id = RepMap<K>::identity_on(fx);
        ARQ_CHECK(id.intertwines(fx, fy), "factor witness must be a module isomorphism");
        out.x_factors.push_back(std::move(fx));
        out.y_factors.push_back(std::move(fy));
        out.factor_isos.push_back(std::move(id));
    }
    DimVec total(static_cast<std::size_t>(n), 0);
    for (const auto& fr : out.x_factors) total = dim_add(total, fr.dims);
    ARQ_CHECK(total == x.ranks, "factor dimensions must exhaust the reduction");
    return out;
}

/* convenience overload: search for the generic isomorphism first */
template <FieldLike K>
MatchedFiltrations<K> filtration_pair(const RQModule<K>& x, const RQModule<K>& y) {
    auto iso = is_isomorphic(x.generic_fiber(), y.generic_fiber());
    ARQ_REQUIRE(iso.isomorphic, "modules are not generically isomorphic");
    return filtration_pair(x, y, iso.witness);
}

/* ---------------------------------------------------------------- *
 *  tau commutes with scalar extension
 * ---------------------------------------------------------------- */

template <FieldLike K>
struct TauBaseChangeReport {
    DimVec lhs_dims, rhs_dims; /* extend(tau X) vs tau(extend X) */
    bool isomorphic = false;
};

template <FieldLike K>
TauBaseChangeReport<K> check_tau_base_change(const Rep<K>& x) {
    x.validate();
    Rep<RatFunc<K>> lhs = extend_scalars(tau_plus(x));
    Rep<RatFunc<K>> rhs = tau_plus(extend_scalars(x));
    TauBaseChangeReport<K> rep;
    rep.lhs_dims = lhs.dims;
    rep.rhs_dims = rhs.dims;
    rep.isomorphic = is_isomorphic(lhs, rhs).isomorphic;
    return rep;
}

/* ---------------------------------------------------------------- *
 *  restriction of handles from a closed point to the generic point
 * ---------------------------------------------------------------- */

template <FieldLike K>
struct PrimeLabel {
    bool generic = true;
    K a{}; /* closed: the point (t - a) */

    static PrimeLabel generic_label() { return PrimeLabel{}; }
    static PrimeLabel closed(const K& v) {
        PrimeLabel p;
        p.generic = false;
        p.a = v;
        return p;
    }
    bool operator==(const PrimeLabel&) const = default;
};

/* transport a homogeneous point label along k -> k(t) functorially: realize
 * the fiber module over k, extend scalars, and read off the describing label
 * over k(t).  This respects whatever parameterization either context uses. */
template <FieldLike K>
std::string lift_point_label(ARContext<K>& ck, ARContext<RatFunc<K>>& cK,
                             const std::string& label) {
    Rep<K> h = ck.realize(IndecDescriptor::homreg(label, 1));
    return cK.describe(extend_scalars(h)).point;
}

/* r_pq: lift a torsion handle over the residue field at a closed point p to
 * a handle over k(t).  Discrete descriptors (PP / PI / Reg names and
 * support vertices) are field-independent under the scalar-extension
 * bijections, so they lift verbatim; homogeneous point labels are carried
 * through the functorial inclusion of closed points of the projective line. */
template <FieldLike K>
TorsionHandle r_pq(ARContext<K>& ck, ARContext<RatFunc<K>>& cK, const TorsionHandle& t,
                   const PrimeLabel<K>& p) {
    ck.require_extended();
    ARQ_REQUIRE(!p.generic, "restriction lifts handles at closed points to the generic point");
    if (t.kind == TorsionHandle::Kind::FF) return t;
    TorsionHandle out = t;
    out.reg.points.clear();
    for (const auto& s : t.reg.points) out.reg.points.push_back(lift_point_label(ck, cK, s));
    return out;
}

}  // namespace arq
