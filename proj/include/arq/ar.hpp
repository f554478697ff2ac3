/* ------------------------------------------------------------------------- */
/* Auslander-Reiten structure of a tame path algebra.                        */
/*                                                                           */
/* ARContext bundles, for a fixed quiver and field:                          */
/*   - the preprojective / regular / preinjective trisection by defect,      */
/*   - the inventory of tubes of rank >= 2 (regular simples in tau-orbit     */
/*     order), found by exhaustive search over zero-defect dimension         */
/*     vectors below the null root,                                          */
/*   - the homogeneous family: a projective module A and a preinjective      */
/*     module B with dim A + dim B = delta and a fixed echelon basis         */
/*     (zeta0, zeta1) of the two-dimensional Ext^1(B, A); the module at a    */
/*     finite point p of regular length l is the middle term for the         */
/*     cocycle zeta0 (x) Id + zeta1 (x) C(p^l), and at infinity for         */
/*     zeta0 (x) C(x^l) + zeta1 (x) Id,                                      */
/*   - realization of symbolic descriptors as explicit matrices and the      */
/*     inverse direction (describe), including recovering the closed point   */
/*     of a homogeneous module from its pencil coordinates.                  */
/*                                                                           */
/* Every randomized or search-based step is followed by an exact             */
/* verification, so results are certified independently of the search.      */
/* ------------------------------------------------------------------------- */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arq/descriptor.hpp"
#include "arq/error.hpp"
#include "arq/exceptional.hpp"
#include "arq/ext.hpp"
#include "arq/fitting.hpp"
#include "arq/format.hpp"
#include "arq/polyroots.hpp"
#include "arq/quiver.hpp"
#include "arq/rep.hpp"
#include "arq/translate.hpp"

namespace arq {

enum class Component { P, R, I };

inline const char* component_name(Component c) {
    switch (c) {
        case Component::P: return "P";
        case Component::R: return "R";
        default: return "I";
    }
}

template <FieldLike K>
struct Tube {
    int rank = 0;
    /* ray order: simples[(i+1) % rank] is isomorphic to tau^-(simples[i]);
     * ray 0 holds the lexicographically smallest dimension vector */
    std::vector<Rep<K>> simples;
    std::vector<DimVec> simple_dims;
};

template <FieldLike K>
struct Pencil {
    int proj_vertex = 0; /* A = P(proj_vertex) */
    Rep<K> a, b;
    Cocycle<K> z0, z1;
};

template <FieldLike K>
struct RegularSeries {
    long long length = 0;
    std::vector<IndecDescriptor> factors; /* socle first */
    std::vector<DimVec> chain;            /* dims of the socle series, smallest first */
};

struct HomCheckReport {
    bool pre_sincere = false; /* P is tau^- sincere or I is tau sincere */
    bool pre_tau_fixed = false;
    long long hom_pi = 0, hom_px = 0, hom_xi = 0;
    bool claim_pi = false;
    bool claim_through_x = false;
};

template <FieldLike K>
class ARContext {
  public:
    Quiver q;
    QuiverType type;

    explicit ARContext(Quiver quiver) : q(std::move(quiver)) {
        q.validate();
        type = classify(q);
        cox_ = coxeter_data(q);
    }

    bool extended() const { return type.kind == QuiverKind::ExtendedDynkin; }
    void require_extended() const {
        ARQ_REQUIRE(extended(), "operation requires an extended Dynkin quiver");
    }

    long long defect_of(const DimVec& d) const {
        require_extended();
        return defect(q, type.delta, d);
    }

    Component component_of_dims(const DimVec& d) const {
        long long df = defect_of(d);
        return df < 0 ? Component::P : (df > 0 ? Component::I : Component::R);
    }

    /* trisection membership of an indecomposable; decomposability is an error */
    Component component_of(const Rep<K>& x) {
        ARQ_REQUIRE(!x.is_zero_rep(), "the zero module has no component");
        auto dec = decompose(x);
        ARQ_REQUIRE(dec.summands.size() == 1, "component_of requires an indecomposable module");
        return component_of_dims(x.dims);
    }

    /* ---------------- tube inventory ---------------- */

    const std::vector<Tube<K>>& tubes() {
        require_extended();
        if (tubes_) return *tubes_;
        const DimVec& delta = type.delta;

        /* candidates: 0 < d <= delta componentwise, d != delta, defect 0,
         * Tits form 1; ascending by total dimension, then lexicographically */
        std::vector<DimVec> cands;
        DimVec d(static_cast<std::size_t>(q.n), 0);
        for (;;) {
            int i = 0;
            while (i < q.n) {
                if (++d[static_cast<std::size_t>(i)] > delta[static_cast<std::size_t>(i)]) {
                    d[static_cast<std::size_t>(i)] = 0;
                    ++i;
                } else {
                    break;
                }
            }
            if (i == q.n) break;
            if (d == delta) continue;
            if (defect(q, delta, d) != 0) continue;
            if (tits_form(q, d) != 1) continue;
            cands.push_back(d);
        }
        std::sort(cands.begin(), cands.end(), [](const DimVec& a, const DimVec& b) {
            long long ta = dim_total(a), tb = dim_total(b);
            if (ta != tb) return ta < tb;
            return a < b;
        });

        /* realize each candidate; it is regular simple iff no smaller regular
         * simple maps into it (a nonzero map from a regular simple into a
         * regular module is injective) */
        std::vector<Rep<K>> simples;
        std::vector<DimVec> sdims;
        for (const auto& c : cands) {
            Rep<K> x = exceptional_rep<K>(q, c);
            bool is_simple = true;
            for (const auto& s : simples)
                if (hom_dim(s, x) > 0) {
                    is_simple = false;
                    break;
                }
            if (is_simple) {
                simples.push_back(std::move(x));
                sdims.push_back(c);
            }
        }

        /* group into tau-orbits, walking tau^- so rays ascend; each orbit is
         * started at its lexicographically smallest dimension vector */
        std::vector<bool> used(simples.size(), false);
        std::vector<Tube<K>> out;
        for (;;) {
            int start = -1;
            for (std::size_t i = 0; i < simples.size(); ++i)
                if (!used[i] && (start < 0 || sdims[i] < sdims[static_cast<std::size_t>(start)]))
                    start = static_cast<int>(i);
            if (start < 0) break;
            Tube<K> t;
            int cur = start;
            for (;;) {
                used[static_cast<std::size_t>(cur)] = true;
                t.simples.push_back(simples[static_cast<std::size_t>(cur)]);
                t.simple_dims.push_back(sdims[static_cast<std::size_t>(cur)]);
                Rep<K> nxt = tau_minus(simples[static_cast<std::size_t>(cur)]);
                int m = -1;
                for (std::size_t j = 0; j < simples.size() && m < 0; ++j)
                    if (sdims[j] == nxt.dims && iso_between_indec(simples[j], nxt).has_value())
                        m = static_cast<int>(j);
                ARQ_CHECK(m >= 0,
                          "tau-inverse of a non-homogeneous regular simple must be an inventory simple");
                if (m == start) break;
                ARQ_CHECK(!used[static_cast<std::size_t>(m)],
                          "tau-orbits of regular simples must be disjoint cycles");
                cur = m;
            }
            t.rank = static_cast<int>(t.simples.size());
            ARQ_CHECK(t.rank >= 2, "an inventory orbit must have rank at least 2");
            DimVec sum(static_cast<std::size_t>(q.n), 0);
            for (const auto& sd : t.simple_dims) sum = dim_add(sum, sd);
            ARQ_CHECK(sum == delta, "tube simple dimension vectors must sum to the null root");
            out.push_back(std::move(t));
        }
        ARQ_CHECK(out.size() <= 3, "at most three tubes of rank at least 2 can exist");
        tubes_ = std::move(out);
        return *tubes_;
    }

    /* ---------------- homogeneous pencil ---------------- */

    const Pencil<K>& pencil() {
        require_extended();
        if (pencil_) return *pencil_;
        const DimVec& delta = type.delta;

        /* A = P(i0) for the least vertex with delta = 1 whose projective sits
         * strictly below the null root */
        int i0 = -1;
        Rep<K> a;
        for (int v = 0; v < q.n && i0 < 0; ++v) {
            if (delta[static_cast<std::size_t>(v)] != 1) continue;
            Rep<K> p = projective_rep<K>(q, v);
            if (!dim_leq(p.dims, delta) || p.dims == delta) continue;
            i0 = v;
            a = std::move(p);
        }
        ARQ_CHECK(i0 >= 0, "no projective below the null root at a multiplicity-one vertex");
        ARQ_CHECK(defect(q, delta, a.dims) == -1, "projective pencil end must have defect -1");

        /* B: the preinjective indecomposable with complementary dimensions,
         * located by walking injective dimension vectors forward with the
         * Coxeter transform, then materialized with tau */
        DimVec bd = dim_sub(delta, a.dims);
        std::optional<Rep<K>> b;
        for (int w = 0; w < q.n && !b; ++w) {
            DimVec cur = injective_rep<K>(q, w).dims;
            for (long long k = 0; k <= 200; ++k) {
                if (cur == bd) {
                    Rep<K> y = injective_rep<K>(q, w);
                    for (long long j = 0; j < k; ++j) y = tau_plus(y);
                    ARQ_CHECK(y.dims == bd, "Coxeter walk and tau disagree on preinjective dims");
                    b = std::move(y);
                    break;
                }
                cur = coxeter_apply(cox_.fwd, cur);
            }
        }
        ARQ_CHECK(b.has_value(), "preinjective pencil end not found");
        ARQ_CHECK(hom_dim(*b, *b) == 1, "preinjective pencil end must have trivial endomorphisms");

        auto basis = ext1_cocycle_basis(*b, a);
        ARQ_CHECK(basis.size() == 2, "the pencil extension space must be two-dimensional");
        Pencil<K> pe;
        pe.proj_vertex = i0;
        pe.a = std::move(a);
        pe.b = std::move(*b);
        pe.z0 = std::move(basis[0]);
        pe.z1 = std::move(basis[1]);
        pencil_ = std::move(pe);
        return *pencil_;
    }

    /* ---------------- realization ---------------- */

    Rep<K> realize(const IndecDescriptor& d) {
        auto it = realize_cache_.find(d.str());
        if (it != realize_cache_.end()) return it->second;
        Rep<K> x = realize_fresh(d);
        realize_cache_.emplace(d.str(), x);
        return x;
    }

    /* ---------------- description ---------------- */

    IndecDescriptor describe(const Rep<K>& x) {
        ARQ_REQUIRE(!x.is_zero_rep(), "cannot describe the zero module");
        ARQ_REQUIRE(x.q.arrows.size() == q.arrows.size() && x.dims.size() == static_cast<std::size_t>(q.n),
                    "module does not live over this context's quiver");
        auto dec = decompose(x);
        ARQ_REQUIRE(dec.summands.size() == 1, "describe requires an indecomposable module");
        if (!extended()) return describe_preprojective(x);
        long long df = defect(q, type.delta, x.dims);
        if (df < 0) return describe_preprojective(x);
        if (df > 0) return describe_preinjective(x);
        auto series = regular_series_unchecked(x);
        return series.second;
    }

    /* regular length together with the socle series; precondition regular */
    RegularSeries<K> regular_length(const Rep<K>& x) {
        ARQ_REQUIRE(!x.is_zero_rep(), "the zero module has no regular length");
        auto dec = decompose(x);
        ARQ_REQUIRE(dec.summands.size() == 1, "regular_length requires an indecomposable module");
        ARQ_REQUIRE(defect_of(x.dims) == 0, "regular_length requires a regular module");
        return regular_series_unchecked(x).first;
    }

    /* ---------------- sincerity of tau-orbits ---------------- */

    /* true iff every tau^- shift of the preprojective descriptor is sincere;
     * decided exactly: once a full Coxeter period has been checked, later
     * vectors repeat the period shifted by positive multiples of delta */
    bool is_tau_minus_sincere(const IndecDescriptor& d) {
        require_extended();
        ARQ_REQUIRE(d.kind == DescKind::PP, "tau-minus sincerity applies to PP descriptors");
        DimVec cur = projective_rep<K>(q, d.vertex).dims;
        for (long long j = 0; j < d.shift; ++j) cur = coxeter_apply(cox_.inv, cur);
        return orbit_always_sincere(cur, /*forward=*/false);
    }

    /* dual statement for preinjective descriptors under tau */
    bool is_tau_sincere(const IndecDescriptor& d) {
        require_extended();
        ARQ_REQUIRE(d.kind == DescKind::PI, "tau sincerity applies to PI descriptors");
        DimVec cur = injective_rep<K>(q, d.vertex).dims;
        for (long long j = 0; j < d.shift; ++j) cur = coxeter_apply(cox_.fwd, cur);
        return orbit_always_sincere(cur, /*forward=*/true);
    }

    /* ---------------- nonvanishing report ---------------- */

    HomCheckReport hom_nonvanishing_check(const IndecDescriptor& pd, const IndecDescriptor& id,
                                          const IndecDescriptor& xd) {
        require_extended();
        ARQ_REQUIRE(pd.kind == DescKind::PP, "first argument must be a preprojective descriptor");
        ARQ_REQUIRE(id.kind == DescKind::PI, "second argument must be a preinjective descriptor");
        ARQ_REQUIRE(xd.kind == DescKind::Reg || xd.kind == DescKind::HomReg,
                    "third argument must be a regular descriptor");
        HomCheckReport r;
        r.pre_sincere = is_tau_minus_sincere(pd) || is_tau_sincere(id);
        Rep<K> p = realize(pd), i = realize(id), x = realize(xd);
        Rep<K> tx = tau_plus(x);
        r.pre_tau_fixed = iso_between_indec(tx, x).has_value();
        r.hom_pi = static_cast<long long>(hom_dim(p, i));
        r.hom_px = static_cast<long long>(hom_dim(p, x));
        r.hom_xi = static_cast<long long>(hom_dim(x, i));
        r.claim_pi = r.hom_pi >= 1;
        r.claim_through_x = r.hom_px >= 1 && r.hom_xi >= 1;
        return r;
    }

    /* ---------------- bounded enumeration ---------------- */

    /* all PP / PI / Reg descriptors of total dimension <= bound; the
     * homogeneous family is reported symbolically by callers, never listed
     * pointwise.  Over a Dynkin quiver every class has a unique PP name and
     * PI duplicates are omitted. */
    std::vector<IndecDescriptor> descriptors_up_to(long long bound) {
        ARQ_REQUIRE(bound >= 1, "enumeration bound must be positive");
        std::vector<IndecDescriptor> out;
        for (int v = 0; v < q.n; ++v)
            walk_orbit(projective_rep<K>(q, v).dims, false, bound,
                       [&](long long k) { out.push_back(IndecDescriptor::pp(v, k)); });
        if (extended()) {
            for (int w = 0; w < q.n; ++w)
                walk_orbit(injective_rep<K>(q, w).dims, true, bound,
                           [&](long long k) { out.push_back(IndecDescriptor::pi(w, k)); });
            const auto& tb = tubes();
            for (std::size_t t = 0; t < tb.size(); ++t)
                for (int i = 0; i < tb[t].rank; ++i)
                    for (long long l = 1;; ++l) {
                        long long total = 0;
                        for (long long j = 0; j < l; ++j)
                            total += dim_total(tb[t].simple_dims[static_cast<std::size_t>(
                                (i + j) % tb[t].rank)]);
                        if (total > bound) break;
                        out.push_back(IndecDescriptor::reg(static_cast<int>(t), i, l));
                    }
        }
        std::sort(out.begin(), out.end(), desc_less);
        return out;
    }

    /* dimension vector of a descriptor without materializing matrices */
    DimVec dims_of(const IndecDescriptor& d) {
        switch (d.kind) {
            case DescKind::PP: {
                DimVec cur = projective_rep<K>(q, d.vertex).dims;
                for (long long j = 0; j < d.shift; ++j) cur = coxeter_apply(cox_.inv, cur);
                return cur;
            }
            case DescKind::PI: {
                DimVec cur = injective_rep<K>(q, d.vertex).dims;
                for (long long j = 0; j < d.shift; ++j) cur = coxeter_apply(cox_.fwd, cur);
                return cur;
            }
            case DescKind::Reg: {
                const auto& tb = tubes();
                ARQ_REQUIRE(d.tube >= 0 && d.tube < static_cast<int>(tb.size()), "tube id out of range");
                const auto& t = tb[static_cast<std::size_t>(d.tube)];
                ARQ_REQUIRE(d.ray >= 0 && d.ray < t.rank, "ray index must be smaller than the tube rank");
                DimVec sum(static_cast<std::size_t>(q.n), 0);
                for (long long j = 0; j < d.len; ++j)
                    sum = dim_add(sum, t.simple_dims[static_cast<std::size_t>((d.ray + j) % t.rank)]);
                return sum;
            }
            case DescKind::HomReg: {
                require_extended();
                long long m = d.len;
                if (d.point != "inf") {
                    auto pp = point_poly<K>(d.point);
                    m *= pp->degree();
                }
                DimVec sum(static_cast<std::size_t>(q.n), 0);
                for (int v = 0; v < q.n; ++v)
                    sum[static_cast<std::size_t>(v)] = m * type.delta[static_cast<std::size_t>(v)];
                return sum;
            }
        }
        ARQ_CHECK(false, "unreachable descriptor kind");
        return {};
    }

    const CoxeterData& coxeter() const { return cox_; }

  private:
    CoxeterData cox_;
    std::optional<std::vector<Tube<K>>> tubes_;
    std::optional<Pencil<K>> pencil_;
    std::map<std::string, Rep<K>> realize_cache_;

    /* ---- orbit dimension walks ---- */

    /* Visits k = 0, 1, ... while the orbit vector stays a positive vector of
     * total dimension <= bound.  Over a Dynkin quiver the walk stops when the
     * vector leaves the positive cone (the orbit ended at a projective /
     * injective); over an extended Dynkin quiver it stops after a full
     * Coxeter period beyond the bound (dimensions then only grow). */
    template <typename Visit>
    void walk_orbit(DimVec start, bool forward, long long bound, Visit visit) {
        const Matrix<Rat>& step = forward ? cox_.fwd : cox_.inv;
        if (!extended()) {
            DimVec cur = start;
            long long k = 0;
            for (;;) {
                /* still a dimension vector <=> no negative coordinate and nonzero */
                bool any_neg = false, any_pos = false;
                for (auto c : cur) {
                    if (c < 0) any_neg = true;
                    if (c > 0) any_pos = true;
                }
                if (any_neg || !any_pos) break;
                if (dim_total(cur) <= bound) visit(k);
                cur = coxeter_apply(step, cur);
                ++k;
                ARQ_CHECK(k <= 4096, "Dynkin tau-orbit failed to terminate");
            }
            return;
        }
        long long h = orbit_period(start, forward);
        DimVec cur = start;
        long long k = 0;
        for (;;) {
            bool window_clear = false;
            DimVec probe = cur;
            for (long long j = 0; j < h; ++j) {
                if (dim_total(probe) <= bound) break;
                probe = coxeter_apply(step, probe);
                if (j + 1 == h) window_clear = true;
            }
            if (window_clear) break;
            if (dim_total(cur) <= bound) visit(k);
            cur = coxeter_apply(step, cur);
            ++k;
            ARQ_CHECK(k <= 1000000, "orbit walk exceeded its safety bound");
        }
    }

    /* smallest h >= 1 with step^h(start) = start + c*delta, c >= 1 */
    long long orbit_period(const DimVec& start, bool forward) {
        const Matrix<Rat>& step = forward ? cox_.fwd : cox_.inv;
        const DimVec& delta = type.delta;
        DimVec cur = start;
        for (long long h = 1; h <= 512; ++h) {
            cur = coxeter_apply(step, cur);
            std::optional<long long> c;
            bool ok = true;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                long long diff = cur[i] - start[i];
                if (diff % delta[i] != 0) {
                    ok = false;
                    break;
                }
                long long ci = diff / delta[i];
                if (!c) c = ci;
                else if (*c != ci) {
                    ok = false;
                    break;
                }
            }
            if (ok && c && *c >= 1) return h;
        }
        ARQ_CHECK(false, "Coxeter period not found within bound");
        return -1;
    }

    bool orbit_always_sincere(const DimVec& start, bool forward) {
        const Matrix<Rat>& step = forward ? cox_.fwd : cox_.inv;
        long long h = orbit_period(start, forward);
        DimVec cur = start;
        for (long long j = 0; j < h; ++j) {
            for (auto c : cur)
                if (c <= 0) return false;
            cur = coxeter_apply(step, cur);
        }
        return true;
    }

    /* ---- realization ---- */

    Rep<K> realize_fresh(const IndecDescriptor& d) {
        switch (d.kind) {
            case DescKind::PP: {
                ARQ_REQUIRE(d.vertex >= 0 && d.vertex < q.n, "descriptor vertex out of range");
                ARQ_REQUIRE(d.shift >= 0, "descriptor shift must be >= 0");
                Rep<K> x = projective_rep<K>(q, d.vertex);
                for (long long j = 0; j < d.shift; ++j) {
                    x = tau_minus(x);
                    ARQ_REQUIRE(!x.is_zero_rep(), "descriptor tau-orbit passes through zero");
                }
                return x;
            }
            case DescKind::PI: {
                ARQ_REQUIRE(d.vertex >= 0 && d.vertex < q.n, "descriptor vertex out of range");
                ARQ_REQUIRE(d.shift >= 0, "descriptor shift must be >= 0");
                Rep<K> x = injective_rep<K>(q, d.vertex);
                for (long long j = 0; j < d.shift; ++j) {
                    x = tau_plus(x);
                    ARQ_REQUIRE(!x.is_zero_rep(), "descriptor tau-orbit passes through zero");
                }
                return x;
            }
            case DescKind::Reg: return realize_reg(d);
            case DescKind::HomReg: return realize_homreg(d);
        }
        ARQ_CHECK(false, "unreachable descriptor kind");
        return Rep<K>{};
    }

    Rep<K> realize_reg(const IndecDescriptor& d) {
        const auto& tb = tubes();
        ARQ_REQUIRE(d.tube >= 0 && d.tube < static_cast<int>(tb.size()), "tube id out of range");
        const Tube<K>& t = tb[static_cast<std::size_t>(d.tube)];
        ARQ_REQUIRE(d.ray >= 0 && d.ray < t.rank, "ray index must be smaller than the tube rank");
        ARQ_REQUIRE(d.len >= 1, "regular length must be >= 1");
        Rep<K> m = t.simples[static_cast<std::size_t>(d.ray)];
        for (long long j = 1; j < d.len; ++j) {
            const Rep<K>& top = t.simples[static_cast<std::size_t>((d.ray + j) % t.rank)];
            auto basis = ext1_cocycle_basis(top, m);
            ARQ_CHECK(basis.size() == 1, "tube extension space must be one-dimensional");
            m = ext_middle(top, m, basis[0]).total;
        }
        long long expected_end = (d.len + t.rank - 1) / t.rank;
        ARQ_CHECK(static_cast<long long>(hom_dim(m, m)) == expected_end,
                  "tube module has unexpected endomorphism dimension");
        return m;
    }

    /* A^m and B^m with the module coordinate outer and the multiplicity
     * inner, so arrow matrices are kron(module arrow, Id_m) */
    Rep<K> outer_power(const Rep<K>& x, std::size_t m) {
        Rep<K> r;
        r.q = q;
        r.dims.resize(static_cast<std::size_t>(q.n));
        for (int v = 0; v < q.n; ++v)
            r.dims[static_cast<std::size_t>(v)] = x.dims[static_cast<std::size_t>(v)] * static_cast<long long>(m);
        Matrix<K> id = Matrix<K>::identity(m);
        for (std::size_t a = 0; a < q.arrows.size(); ++a) r.mats.push_back(kron(x.mats[a], id));
        r.validate();
        return r;
    }

    Rep<K> realize_homreg(const IndecDescriptor& d) {
        const Pencil<K>& pe = pencil();
        ARQ_REQUIRE(d.len >= 1, "regular length must be >= 1");
        auto pp = point_poly<K>(d.point);
        Matrix<K> m0, m1;
        if (pp) {
            long long deg = pp->degree();
            if (deg >= 2) {
                if constexpr (field_traits<K>::is_rational_function) {
                    ARQ_REQUIRE(false, "point labels over a rational-function base must have degree 1");
                } else {
                    auto fac = factor_complete(*pp);
                    ARQ_REQUIRE(fac.size() == 1 && fac[0].second == 1,
                                "point label must be an irreducible polynomial");
                }
            }
            Poly<K> pl = poly_pow(*pp, static_cast<int>(d.len));
            m0 = Matrix<K>::identity(static_cast<std::size_t>(pl.degree()));
            m1 = companion_matrix(pl);
        } else {
            Poly<K> xl = poly_pow(Poly<K>::x(), static_cast<int>(d.len));
            m0 = companion_matrix(xl);
            m1 = Matrix<K>::identity(static_cast<std::size_t>(d.len));
        }
        const std::size_t m = m0.rows();
        Rep<K> am = outer_power(pe.a, m), bm = outer_power(pe.b, m);
        Cocycle<K> z;
        for (std::size_t a = 0; a < q.arrows.size(); ++a)
            z.per_arrow.push_back(kron(pe.z0.per_arrow[a], m0) + kron(pe.z1.per_arrow[a], m1));
        Rep<K> e = ext_middle(bm, am, z).total;
        ARQ_REQUIRE(static_cast<long long>(hom_dim(e, e)) == static_cast<long long>(m),
                    "point is not homogeneous: unexpected endomorphism dimension");
        Rep<K> te = tau_plus(e);
        ARQ_REQUIRE(is_isomorphic(te, e).isomorphic, "point is not homogeneous: module is not tau-fixed");
        return e;
    }

    /* ---- description ---- */

    IndecDescriptor describe_preprojective(const Rep<K>& x) {
        Rep<K> y = x;
        long long k = 0;
        for (;;) {
            Rep<K> ty = tau_plus(y);
            if (ty.is_zero_rep()) break;
            y = std::move(ty);
            ++k;
            ARQ_CHECK(k <= 100000, "tau walk failed to reach a projective");
        }
        for (int v = 0; v < q.n; ++v) {
            Rep<K> p = projective_rep<K>(q, v);
            if (p.dims == y.dims && iso_between_indec(p, y).has_value())
                return IndecDescriptor::pp(v, k);
        }
        ARQ_CHECK(false, "tau walk ended at a module that is not projective");
        return {};
    }

    IndecDescriptor describe_preinjective(const Rep<K>& x) {
        Rep<K> y = x;
        long long k = 0;
        for (;;) {
            Rep<K> ty = tau_minus(y);
            if (ty.is_zero_rep()) break;
            y = std::move(ty);
            ++k;
            ARQ_CHECK(k <= 100000, "tau-inverse walk failed to reach an injective");
        }
        for (int w = 0; w < q.n; ++w) {
            Rep<K> i = injective_rep<K>(q, w);
            if (i.dims == y.dims && iso_between_indec(i, y).has_value())
                return IndecDescriptor::pi(w, k);
        }
        ARQ_CHECK(false, "tau-inverse walk ended at a module that is not injective");
        return {};
    }

    /* series + descriptor for a regular indecomposable (already verified) */
    std::pair<RegularSeries<K>, IndecDescriptor> regular_series_unchecked(const Rep<K>& x) {
        const auto& tb = tubes();
        int tube = -1, socle = -1;
        for (std::size_t t = 0; t < tb.size() && tube < 0; ++t)
            for (int i = 0; i < tb[t].rank && tube < 0; ++i)
                if (hom_dim(tb[t].simples[static_cast<std::size_t>(i)], x) > 0) {
                    tube = static_cast<int>(t);
                    socle = i;
                }
        if (tube < 0) {
            auto [label, len] = homog_point_of(x);
            RegularSeries<K> s;
            s.length = len;
            DimVec step = dims_of(IndecDescriptor::homreg(label, 1));
            DimVec acc(static_cast<std::size_t>(q.n), 0);
            for (long long j = 0; j < len; ++j) {
                s.factors.push_back(IndecDescriptor::homreg(label, 1));
                acc = dim_add(acc, step);
                s.chain.push_back(acc);
            }
            ARQ_CHECK(s.chain.back() == x.dims, "homogeneous series must exhaust the module");
            return {std::move(s), IndecDescriptor::homreg(label, len)};
        }

        const Tube<K>& t = tb[static_cast<std::size_t>(tube)];
        RegularSeries<K> s;
        Rep<K> cur = x;
        DimVec acc(static_cast<std::size_t>(q.n), 0);
        long long len = 0;
        while (!cur.is_zero_rep()) {
            int expect = static_cast<int>((socle + len) % t.rank);
            /* the regular socle is the unique inventory simple mapping in */
            for (std::size_t tt = 0; tt < tb.size(); ++tt)
                for (int i = 0; i < tb[tt].rank; ++i) {
                    bool nonzero = hom_dim(tb[tt].simples[static_cast<std::size_t>(i)], cur) > 0;
                    bool expected = static_cast<int>(tt) == tube && i == expect;
                    ARQ_CHECK(nonzero == expected, "tube series must ascend the rays cyclically");
                }
            const Rep<K>& soc = t.simples[static_cast<std::size_t>(expect)];
            auto maps = hom_space(soc, cur);
            ARQ_CHECK(!maps.empty(), "lost the regular socle while peeling");
            const RepMap<K>& f = maps[0];
            for (int v = 0; v < q.n; ++v)
                ARQ_CHECK(rank(f.comps[static_cast<std::size_t>(v)]) ==
                              static_cast<std::size_t>(soc.dims[static_cast<std::size_t>(v)]),
                          "a nonzero map from a regular simple must be injective");
            s.factors.push_back(IndecDescriptor::reg(tube, expect, 1));
            acc = dim_add(acc, soc.dims);
            s.chain.push_back(acc);
            ++len;
            ARQ_CHECK(len <= 100000, "tube peeling failed to terminate");
            cur = quotient_rep(cur, f).rep;
        }
        s.length = len;
        return {std::move(s), IndecDescriptor::reg(tube, socle, len)};
    }

    /* recover (point, length) of a homogeneous indecomposable from its
     * pencil coordinates: split off the trace of A, identify sub and
     * quotient with free multiples of A and B, read the connecting cocycle
     * in the (zeta0, zeta1) basis as a matrix pair (M0, M1), and take the
     * minimal polynomial of M1 * M0^-1 (or the point at infinity when M1 is
     * the invertible one) */
    std::pair<std::string, long long> homog_point_of(const Rep<K>& x) {
        const Pencil<K>& pe = pencil();
        const DimVec& delta = type.delta;
        long long m = -1;
        for (int v = 0; v < q.n; ++v)
            if (delta[static_cast<std::size_t>(v)] == 1) m = x.dims[static_cast<std::size_t>(v)];
        ARQ_CHECK(m >= 1, "homogeneous module with empty dimensions");
        for (int v = 0; v < q.n; ++v)
            ARQ_CHECK(x.dims[static_cast<std::size_t>(v)] == m * delta[static_cast<std::size_t>(v)],
                      "homogeneous module dimensions must be a multiple of the null root");
        const std::size_t mu = static_cast<std::size_t>(m);

        auto fs = hom_space(pe.a, x);
        ARQ_CHECK(fs.size() == mu, "trace of the projective pencil end has wrong multiplicity");
        std::vector<Matrix<K>> spans(static_cast<std::size_t>(q.n));
        for (int v = 0; v < q.n; ++v) {
            Matrix<K> sp(static_cast<std::size_t>(x.dims[static_cast<std::size_t>(v)]), 0);
            for (const auto& f : fs) sp = hstack(sp, f.comps[static_cast<std::size_t>(v)]);
            spans[static_cast<std::size_t>(v)] = std::move(sp);
        }
        /* F : A^m -> X, columns ordered with the A coordinate outer */
        RepMap<K> bigf;
        bigf.comps.resize(static_cast<std::size_t>(q.n));
        for (int v = 0; v < q.n; ++v) {
            const std::size_t av = static_cast<std::size_t>(pe.a.dims[static_cast<std::size_t>(v)]);
            Matrix<K> fv(static_cast<std::size_t>(x.dims[static_cast<std::size_t>(v)]), av * mu);
            for (std::size_t j = 0; j < av; ++j)
                for (std::size_t s = 0; s < mu; ++s)
                    for (std::size_t r = 0; r < fv.rows(); ++r)
                        fv.at(r, j * mu + s) = fs[s].comps[static_cast<std::size_t>(v)].at(r, j);
            bigf.comps[static_cast<std::size_t>(v)] = std::move(fv);
        }
        Rep<K> am = outer_power(pe.a, mu), bm = outer_power(pe.b, mu);
        ARQ_CHECK(bigf.intertwines(am, x), "assembled trace map must intertwine");

        auto qt = quotient_rep(x, bigf);
        ARQ_CHECK(qt.rep.dims == bm.dims, "quotient by the trace of A must match B multiplicities");
        auto gs = hom_space(qt.rep, pe.b);
        ARQ_CHECK(gs.size() == mu, "quotient must be a free multiple of the preinjective end");
        RepMap<K> bigg;
        bigg.comps.resize(static_cast<std::size_t>(q.n));
        for (int v = 0; v < q.n; ++v) {
            const std::size_t bv = static_cast<std::size_t>(pe.b.dims[static_cast<std::size_t>(v)]);
            const std::size_t cols = static_cast<std::size_t>(qt.rep.dims[static_cast<std::size_t>(v)]);
            Matrix<K> gv(bv * mu, cols);
            for (std::size_t r = 0; r < bv; ++r)
                for (std::size_t s = 0; s < mu; ++s)
                    for (std::size_t c = 0; c < cols; ++c)
                        gv.at(r * mu + s, c) = gs[s].comps[static_cast<std::size_t>(v)].at(r, c);
            bigg.comps[static_cast<std::size_t>(v)] = std::move(gv);
        }
        ARQ_CHECK(bigg.intertwines(qt.rep, bm), "assembled cotrace map must intertwine");
        ARQ_CHECK(bigg.is_invertible(), "cotrace map must identify the quotient with B^m");

        /* adapted basis P_v = [F_v | S_v] with (G proj) S = Id */
        RepMap<K> pi = compose(bigg, qt.proj); /* X -> B^m */
        std::vector<Matrix<K>> pbas(static_cast<std::size_t>(q.n)), pinv(static_cast<std::size_t>(q.n));
        for (int v = 0; v < q.n; ++v) {
            const Matrix<K>& pv = pi.comps[static_cast<std::size_t>(v)];
            const std::size_t cols = pv.rows();
            Matrix<K> sec(pv.cols(), cols);
            for (std::size_t c = 0; c < cols; ++c) {
                std::vector<K> e(pv.rows(), field_traits<K>::zero());
                e[c] = field_traits<K>::one();
                auto sol = solve_linear(pv, e);
                ARQ_CHECK(sol.consistent, "projection onto B^m must be surjective");
                for (std::size_t rr = 0; rr < sec.rows(); ++rr) sec.at(rr, c) = sol.particular[rr];
            }
            Matrix<K> full = hstack(bigf.comps[static_cast<std::size_t>(v)], sec);
            auto inv = try_inverse(full);
            ARQ_CHECK(inv.has_value(), "adapted basis must be invertible");
            pbas[static_cast<std::size_t>(v)] = std::move(full);
            pinv[static_cast<std::size_t>(v)] = std::move(*inv);
        }
        /* transported arrows: upper-left A^m, lower-right B^m, read Z */
        Cocycle<K> z;
        for (std::size_t a = 0; a < q.arrows.size(); ++a) {
            const int u = q.arrows[a].src, w = q.arrows[a].tgt;
            Matrix<K> t =
                pinv[static_cast<std::size_t>(w)] * x.mats[a] * pbas[static_cast<std::size_t>(u)];
            const std::size_t aw = static_cast<std::size_t>(am.dims[static_cast<std::size_t>(w)]);
            const std::size_t au = static_cast<std::size_t>(am.dims[static_cast<std::size_t>(u)]);
            ARQ_CHECK(t.block(0, 0, aw, au) == am.mats[a], "adapted basis must show A^m in the corner");
            ARQ_CHECK(t.block(aw, au, t.rows() - aw, t.cols() - au) == bm.mats[a],
                      "adapted basis must show B^m in the corner");
            ARQ_CHECK(t.block(aw, 0, t.rows() - aw, au).is_zero_matrix(),
                      "adapted basis must kill the lower-left block");
            z.per_arrow.push_back(t.block(0, au, aw, t.cols() - au));
        }

        /* solve z = sum c0_ij zeta0 (x) E_ij + c1_ij zeta1 (x) E_ij + coboundary */
        const std::size_t zdim = cocycle_dim(bm, am);
        std::vector<K> zvec;
        zvec.reserve(zdim);
        for (const auto& mtx : z.per_arrow)
            for (const auto& e : mtx.d) zvec.push_back(e);
        Matrix<K> cob = coboundary_matrix(bm, am);
        const std::size_t unknowns = 2 * mu * mu + cob.cols();
        Matrix<K> sys(zdim, unknowns);
        for (int which = 0; which < 2; ++which) {
            const Cocycle<K>& zeta = which == 0 ? pe.z0 : pe.z1;
            for (std::size_t i = 0; i < mu; ++i)
                for (std::size_t j = 0; j < mu; ++j) {
                    Matrix<K> eij(mu, mu);
                    eij.at(i, j) = field_traits<K>::one();
                    std::size_t col = static_cast<std::size_t>(which) * mu * mu + i * mu + j;
                    std::size_t row = 0;
                    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
                        Matrix<K> blk = kron(zeta.per_arrow[a], eij);
                        for (const auto& e : blk.d) sys.at(row++, col) = e;
                    }
                    ARQ_CHECK(row == zdim, "cocycle coordinate mismatch");
                }
        }
        for (std::size_t c = 0; c < cob.cols(); ++c)
            for (std::size_t r = 0; r < zdim; ++r) sys.at(r, 2 * mu * mu + c) = cob.at(r, c);
        auto sol = solve_linear(sys, zvec);
        ARQ_CHECK(sol.consistent, "cocycle must decompose over the pencil basis");
        Matrix<K> c0(mu, mu), c1(mu, mu);
        for (std::size_t i = 0; i < mu; ++i)
            for (std::size_t j = 0; j < mu; ++j) {
                c0.at(i, j) = sol.particular[i * mu + j];
                c1.at(i, j) = sol.particular[mu * mu + i * mu + j];
            }

        auto inv0 = try_inverse(c0);
        if (inv0) {
            Matrix<K> theta = c1 * (*inv0);
            Poly<K> mp = matrix_min_poly(theta);
            ARQ_CHECK(mp.degree() == static_cast<long long>(mu),
                      "pencil coordinate operator must generate the endomorphism ring");
            Poly<K> rad = poly_radical(mp).monic();
            long long deg = rad.degree();
            ARQ_CHECK(deg >= 1 && static_cast<long long>(mu) % deg == 0,
                      "minimal polynomial must be a prime power");
            long long len = static_cast<long long>(mu) / deg;
            Poly<K> check = poly_pow(rad, static_cast<int>(len));
            ARQ_CHECK(check == mp.monic(), "minimal polynomial must be a prime power");
            return {poly_str(rad, poly_var<K>()), len};
        }
        auto inv1 = try_inverse(c1);
        ARQ_CHECK(inv1.has_value(),
                  "pencil coordinates of a homogeneous indecomposable need an invertible side");
        Matrix<K> theta = c0 * (*inv1);
        Poly<K> mp = matrix_min_poly(theta);
        ARQ_CHECK(mp.degree() == static_cast<long long>(mu),
                  "pencil coordinate operator must generate the endomorphism ring");
        Poly<K> rad = poly_radical(mp).monic();
        ARQ_CHECK(rad == Poly<K>::x(), "the infinite point must give a nilpotent coordinate");
        return {"inf", static_cast<long long>(mu)};
    }
};

}  // namespace arq
