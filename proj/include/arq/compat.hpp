/* ------------------------------------------------------------------------- */
/* Torsion-handle families over the affine line.                             */
/*                                                                           */
/* A family picks one torsion handle per prime of k[t]: an explicit handle   */
/* at the generic point (over k(t)), handles at finitely many listed         */
/* rational closed points (t - a), and a default handle for the cofinite     */
/* rest.  A family is compatible when the lift of each closed-point handle   */
/* contains the generic handle.  Gluing runs the other way: a generic        */
/* indecomposable is realized as a polynomial module whose reductions land   */
/* in the prescribed closed-point classes, with membership certificates at   */
/* every listed prime.  phi_t closes the loop by sending polynomial modules  */
/* to the family of torsion closures of their fibers.                        */
/* ------------------------------------------------------------------------- */
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arq/ar.hpp"
#include "arq/basechange.hpp"
#include "arq/descriptor.hpp"
#include "arq/error.hpp"
#include "arq/ext.hpp"
#include "arq/fitting.hpp"
#include "arq/format.hpp"
#include "arq/rep.hpp"
#include "arq/torsion.hpp"
#include "arq/translate.hpp"

namespace arq {

/* ---------------------------------------------------------------- *
 *  small polynomial utilities
 * ---------------------------------------------------------------- */

namespace detail {

template <FieldLike K>
Poly<K> poly_lcm(const Poly<K>& a, const Poly<K>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<K>::zero();
    Poly<K> g = poly_gcd(a, b);
    return poly_divmod(a * b, g).first.monic();
}

/* divisors of |n|, or nullopt when trial division would take too long */
inline std::optional<std::vector<BigInt>> divisors_capped(BigInt n, long long cap) {
    if (n < 0) n = -n;
    std::vector<BigInt> out;
    if (n == 0) return out;
    long long steps = 0;
    for (BigInt d = 1; d * d <= n; ++d) {
        if (++steps > cap) return std::nullopt;
        if (n % d == 0) {
            out.push_back(d);
            out.push_back(n / d);
        }
    }
    return out;
}

/* all roots of p that lie in K itself.  Exact over finite fields; over the
 * rationals via the rational root criterion, falling back to a small scan
 * when the coefficient divisors are out of reach. */
template <FieldLike K>
std::vector<K> rational_roots(const Poly<K>& p) {
    std::vector<K> roots;
    if (p.is_zero() || p.degree() == 0) return roots;
    if constexpr (field_traits<K>::finite) {
        for (std::uint64_t i = 0; i < field_traits<K>::order; ++i) {
            K a = field_traits<K>::element(i);
            if (arq::is_zero(p.eval(a))) roots.push_back(a);
        }
    } else if constexpr (std::is_same_v<K, Rat>) {
        Poly<Rat> q = p;
        if (q.ord() > 0) {
            roots.push_back(Rat(0));
            std::vector<Rat> cs(q.c.begin() + q.ord(), q.c.end());
            q = Poly<Rat>::from_coeffs(std::move(cs));
        }
        if (q.degree() >= 1) {
            BigInt scale = 1;
            for (const Rat& c : q.c) scale = lcm(scale, rat_den(c));
            std::vector<BigInt> ic;
            for (const Rat& c : q.c) ic.push_back(rat_num(c * Rat(scale)));
            auto lows = divisors_capped(ic.front(), 100000);
            auto highs = divisors_capped(ic.back(), 100000);
            std::set<Rat> cand;
            if (lows && highs) {
                for (const BigInt& a : *lows)
                    for (const BigInt& b : *highs) {
                        cand.insert(Rat(a, b));
                        cand.insert(-Rat(a, b));
                    }
            } else {
                /* coefficients too large to factor quickly: scan small values */
                for (long long v = -64; v <= 64; ++v) cand.insert(Rat(v));
            }
            for (const Rat& a : cand)
                if (arq::is_zero(q.eval(a))) roots.push_back(a);
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    } else {
        ARQ_REQUIRE(false, "root finding is not supported over this coefficient field");
    }
    return roots;
}

} // namespace detail

/* ---------------------------------------------------------------- *
 *  families
 * ---------------------------------------------------------------- */

template <FieldLike K>
std::string prime_str(const PrimeLabel<K>& p) {
    if (p.generic) return "(0)";
    return "(t - " + scalar_str(p.a) + ")";
}

template <FieldLike K>
struct TorsionFamily {
    TorsionHandle generic_handle;                         /* over k(t) */
    std::vector<std::pair<K, TorsionHandle>> assignments; /* listed closed points */
    TorsionHandle default_handle;                         /* all unlisted closed points */

    const TorsionHandle& at_point(const K& a) const {
        for (const auto& [b, h] : assignments)
            if (b == a) return h;
        return default_handle;
    }
    bool listed(const K& a) const {
        for (const auto& [b, h] : assignments)
            if (b == a) return true;
        return false;
    }
    void sort_assignments() {
        std::sort(assignments.begin(), assignments.end(),
                  [](const auto& x, const auto& y) { return scalar_str(x.first) < scalar_str(y.first); });
        for (std::size_t i = 1; i < assignments.size(); ++i)
            ARQ_REQUIRE(!(assignments[i - 1].first == assignments[i].first),
                        "duplicate closed point in family");
    }
    std::string str() const {
        TorsionFamily copy = *this;
        copy.sort_assignments();
        std::string out = "generic: " + generic_handle.str() + "\n";
        for (const auto& [a, h] : copy.assignments)
            out += "at " + scalar_str(a) + ": " + h.str() + "\n";
        out += "default: " + default_handle.str() + "\n";
        return out;
    }
};

template <FieldLike K>
TorsionFamily<K> parse_family(const std::string& text) {
    TorsionFamily<K> fam;
    bool saw_generic = false, saw_default = false;
    for (const std::string& raw : significant_lines(text)) {
        std::string line = raw;
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto e = s.find_last_not_of(" \t");
            if (e != std::string::npos) s.erase(e + 1);
        };
        trim(line);
        auto colon = line.find(':');
        if (colon == std::string::npos) throw parse_error("family line needs a colon: " + line);
        std::string head = line.substr(0, colon), body = line.substr(colon + 1);
        trim(head);
        trim(body);
        if (head == "generic") {
            if (saw_generic) throw parse_error("duplicate generic line");
            fam.generic_handle = parse_handle(body);
            saw_generic = true;
        } else if (head == "default") {
            if (saw_default) throw parse_error("duplicate default line");
            fam.default_handle = parse_handle(body);
            saw_default = true;
        } else if (head.rfind("at ", 0) == 0) {
            K a = parse_scalar<K>(head.substr(3));
            fam.assignments.emplace_back(a, parse_handle(body));
        } else {
            throw parse_error("unrecognized family line: " + line);
        }
    }
    if (!saw_generic) throw parse_error("family is missing its generic line");
    if (!saw_default) throw parse_error("family is missing its default line");
    fam.sort_assignments();
    return fam;
}

/* ---------------------------------------------------------------- *
 *  handle containment over a single field
 * ---------------------------------------------------------------- */

struct Containment {
    bool contained = false;
    std::string witness;             /* a member of the left side outside the right */
    std::vector<std::string> notes;  /* bounded-evidence markers */
};

namespace detail {

/* does the spec cover the whole tube, i.e. reach every quasi-simple */
inline bool spec_covers_whole(const TubeSpec& ts, int rank) {
    if (ts.whole) return true;
    for (int i = 0; i < rank; ++i)
        if (!tube_spec_member(ts, rank, i, 1)) return false;
    return true;
}

template <FieldLike K>
std::optional<IndecDescriptor> tau_minus_sincere_summand(ARContext<K>& ctx,
                                                         const SupportTauTiltingPair& p) {
    if (!ctx.extended()) return std::nullopt;
    for (const auto& d : p.modules())
        if (d.kind == DescKind::PP && ctx.is_tau_minus_sincere(d)) return d;
    return std::nullopt;
}

/* a handful of homogeneous point labels over K, for sampling */
template <FieldLike K>
std::vector<std::string> sample_point_labels(int count) {
    std::vector<std::string> out;
    Poly<K> x = Poly<K>::x();
    for (int i = 0; i < count; ++i) {
        K c = field_traits<K>::zero();
        for (int j = 0; j < i; ++j) c = c + field_traits<K>::one();
        out.push_back(canonical_point<K>(poly_str(x - Poly<K>(c), poly_var<K>())));
        if constexpr (field_traits<K>::finite)
            if (static_cast<std::uint64_t>(i + 1) >= field_traits<K>::order) break;
    }
    return out;
}

} // namespace detail

/* decides whether every module of class `a` lies in class `b`.  Exact except
 * for one case flagged in the notes: an upper class inside a finitely
 * generated class without a tau-minus-sincere preprojective summand is
 * verified on all preinjectives within the bound only. */
template <FieldLike K>
Containment handle_leq_report(ARContext<K>& ctx, const TorsionHandle& a, const TorsionHandle& b,
                              long long bound = 0) {
    if (bound <= 0) bound = default_probe(ctx);
    Containment out;
    out.contained = true;

    if (a.kind == TorsionHandle::Kind::FF) {
        for (const auto& d : a.pair.modules()) {
            Rep<K> m = ctx.realize(d);
            if (!handle_membership(ctx, b, m)) {
                out.contained = false;
                out.witness = d.str();
                return out;
            }
        }
        return out;
    }

    ctx.require_extended();
    if (b.kind == TorsionHandle::Kind::Upper) {
        if (a.reg.all_homog && !b.reg.all_homog) {
            /* find a homogeneous point the right side misses */
            std::set<std::string> bp;
            for (const auto& p : b.reg.points) bp.insert(canonical_point<K>(p));
            for (const auto& lbl : detail::sample_point_labels<K>(static_cast<int>(bp.size()) + 2)) {
                if (!bp.count(lbl)) {
                    out.contained = false;
                    out.witness = "HomReg(" + lbl + ",1)";
                    return out;
                }
            }
            if (!bp.count("inf")) {
                out.contained = false;
                out.witness = "HomReg(inf,1)";
                return out;
            }
            /* every degree-one point is listed (tiny field); an irreducible
             * quadratic names a point the finite list cannot cover */
            if constexpr (field_traits<K>::finite) {
                for (std::uint64_t c1 = 0; c1 < field_traits<K>::order; ++c1)
                    for (std::uint64_t c0 = 0; c0 < field_traits<K>::order; ++c0) {
                        Poly<K> p = Poly<K>::from_coeffs({field_traits<K>::element(c0),
                                                          field_traits<K>::element(c1),
                                                          field_traits<K>::one()});
                        if (detail::rational_roots(p).empty()) {
                            out.contained = false;
                            out.witness =
                                "HomReg(" + canonical_point<K>(poly_str(p, poly_var<K>())) + ",1)";
                            return out;
                        }
                    }
            }
            ARQ_CHECK(false, "no homogeneous point outside a finite list could be produced");
            return out;
        }
        if (!a.reg.all_homog)
            for (const auto& p : a.reg.points) {
                std::string cp = canonical_point<K>(p);
                bool ok = b.reg.all_homog;
                if (!ok)
                    for (const auto& q : b.reg.points)
                        if (canonical_point<K>(q) == cp) ok = true;
                if (!ok) {
                    out.contained = false;
                    out.witness = "HomReg(" + cp + ",1)";
                    return out;
                }
            }
        auto tubes = ctx.tubes();
        for (const auto& [idx, ts] : a.reg.tube_map) {
            int rank = tubes[static_cast<std::size_t>(idx)].rank;
            TubeSpec bs;
            auto it = b.reg.tube_map.find(idx);
            if (it != b.reg.tube_map.end()) bs = it->second;
            if (ts.whole || detail::spec_covers_whole(ts, rank)) {
                if (!detail::spec_covers_whole(bs, rank)) {
                    for (int i = 0; i < rank; ++i)
                        if (!tube_spec_member(bs, rank, i, 1)) {
                            out.contained = false;
                            out.witness = IndecDescriptor::reg(idx, i, 1).str();
                            return out;
                        }
                }
                continue;
            }
            for (const auto& g : ts.gens)
                if (!bs.whole && !tube_spec_member(bs, rank, g.ray, g.len)) {
                    out.contained = false;
                    out.witness = g.str();
                    return out;
                }
        }
        return out;
    }

    /* upper class against a finitely generated class */
    auto tubes = ctx.tubes();
    for (const auto& [idx, ts] : a.reg.tube_map) {
        int rank = tubes[static_cast<std::size_t>(idx)].rank;
        std::vector<IndecDescriptor> need;
        if (ts.whole || detail::spec_covers_whole(ts, rank)) {
            for (int i = 0; i < rank; ++i) need.push_back(IndecDescriptor::reg(idx, i, 1));
        } else {
            need = ts.gens;
        }
        for (const auto& d : need)
            if (!handle_membership(ctx, b, ctx.realize(d))) {
                out.contained = false;
                out.witness = d.str();
                return out;
            }
    }
    std::vector<std::string> pts = a.reg.points;
    if (a.reg.all_homog) pts = detail::sample_point_labels<K>(3);
    for (const auto& p : pts) {
        IndecDescriptor d = IndecDescriptor::homreg(canonical_point<K>(p), 1);
        if (!handle_membership(ctx, b, ctx.realize(d))) {
            out.contained = false;
            out.witness = d.str();
            return out;
        }
    }
    auto sincere = detail::tau_minus_sincere_summand(ctx, b.pair);
    std::vector<IndecDescriptor> pis;
    for (const auto& d : ctx.descriptors_up_to(bound))
        if (d.kind == DescKind::PI) pis.push_back(d);
    if (sincere) {
        /* the sincere preprojective generates every preinjective; spot-check a few */
        for (std::size_t i = 0; i < pis.size() && i < 4; ++i)
            ARQ_CHECK(handle_membership(ctx, b, ctx.realize(pis[i])),
                      "preinjective escaped a class generated by a tau-minus-sincere "
                      "preprojective");
        return out;
    }
    for (const auto& d : pis)
        if (!handle_membership(ctx, b, ctx.realize(d))) {
            out.contained = false;
            out.witness = d.str();
            return out;
        }
    out.notes.push_back("no structural certificate for the preinjective family; verified all "
                        "preinjectives of dimension <= " + std::to_string(bound));
    return out;
}

/* ---------------------------------------------------------------- *
 *  compatibility
 * ---------------------------------------------------------------- */

struct CompatEntry {
    std::string prime;
    bool ok = false;
    std::string witness;
    std::vector<std::string> notes;
};

struct CompatReport {
    bool compatible = false;
    std::vector<CompatEntry> entries;
};

/* the family is compatible when the lift of the handle at every listed closed
 * point (and of the default handle, once) contains the generic handle */
template <FieldLike K>
CompatReport is_compatible(ARContext<K>& ck, ARContext<RatFunc<K>>& cK, const TorsionFamily<K>& f,
                           long long bound = 0) {
    CompatReport rep;
    rep.compatible = true;
    auto check_one = [&](const std::string& label, const TorsionHandle& h) {
        TorsionHandle lifted = r_pq(ck, cK, h, PrimeLabel<K>::closed(field_traits<K>::zero()));
        Containment c = handle_leq_report(cK, f.generic_handle, lifted, bound);
        CompatEntry e;
        e.prime = label;
        e.ok = c.contained;
        e.witness = c.witness;
        e.notes = c.notes;
        if (!c.contained) rep.compatible = false;
        rep.entries.push_back(std::move(e));
    };
    TorsionFamily<K> fam = f;
    fam.sort_assignments();
    for (const auto& [a, h] : fam.assignments) check_one(prime_str(PrimeLabel<K>::closed(a)), h);
    check_one("default", fam.default_handle);
    return rep;
}

/* ---------------------------------------------------------------- *
 *  gluing witnesses
 * ---------------------------------------------------------------- */

struct MembershipCert {
    std::string prime;
    DimVec reduced_dims;
    bool member = false;
};

template <FieldLike K>
struct GlueWitness {
    RQModule<K> x;
    PrimeLabel<K> target;
    RepMap<RatFunc<K>> iso; /* generic fiber of x -> the requested module */
    std::vector<MembershipCert> certs;
    bool homogeneous_case = false;
    std::vector<std::string> notes;

    bool all_certs_pass() const {
        for (const auto& c : certs)
            if (!c.member) return false;
        return true;
    }
};

namespace detail {

/* a closed point not listed by the family, for checking the default handle */
template <FieldLike K>
std::optional<K> fresh_point(const TorsionFamily<K>& f) {
    std::uint64_t limit = 1000;
    if constexpr (field_traits<K>::finite) limit = field_traits<K>::order;
    K a = field_traits<K>::zero();
    for (std::uint64_t i = 0; i < limit; ++i) {
        if (!f.listed(a)) return a;
        a = a + field_traits<K>::one();
    }
    return std::nullopt;
}

template <FieldLike K>
RatFunc<K> linear_power(const K& a, long long e) {
    Poly<K> lin = Poly<K>::x() - Poly<K>(a);
    Poly<K> acc = Poly<K>::one();
    for (long long i = 0; i < e; ++i) acc = acc * lin;
    return RatFunc<K>{acc, Poly<K>::one()};
}

/* rescale the realization of a generic-fiber module by per-vertex polynomial
 * units so that every arrow matrix becomes polynomial in t */
template <FieldLike K>
RQModule<K> polynomial_lift(const Quiver& q, const Rep<RatFunc<K>>& r) {
    std::vector<int> topo = q.topo_order();
    ARQ_REQUIRE(topo.size() == static_cast<std::size_t>(q.n), "quiver must be acyclic");
    std::vector<Poly<K>> g(static_cast<std::size_t>(q.n), Poly<K>::one());
    std::vector<Poly<K>> den(q.arrows.size(), Poly<K>::one());
    for (std::size_t a = 0; a < q.arrows.size(); ++a)
        for (std::size_t i = 0; i < r.mats[a].rows(); ++i)
            for (std::size_t j = 0; j < r.mats[a].cols(); ++j)
                den[a] = poly_lcm(den[a], r.mats[a].at(i, j).den);
    for (int v : topo)
        for (std::size_t a = 0; a < q.arrows.size(); ++a)
            if (q.arrows[a].tgt == v)
                g[static_cast<std::size_t>(v)] =
                    poly_lcm(g[static_cast<std::size_t>(v)],
                             g[static_cast<std::size_t>(q.arrows[a].src)] * den[a]);
    RQModule<K> out(q, r.dims);
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        RatFunc<K> s{g[static_cast<std::size_t>(q.arrows[a].tgt)],
                     g[static_cast<std::size_t>(q.arrows[a].src)]};
        for (std::size_t i = 0; i < r.mats[a].rows(); ++i)
            for (std::size_t j = 0; j < r.mats[a].cols(); ++j)
                out.mats[a].at(i, j) = s * r.mats[a].at(i, j);
    }
    out.validate();
    return out;
}

/* conjugate by per-coordinate powers of (t - a): the module of the sublattice
 * spanned by (t-a)^{e_i} times the standard basis */
template <FieldLike K>
std::optional<RQModule<K>> sublattice_twist(const RQModule<K>& x, const K& a,
                                            const std::vector<long long>& expo) {
    RQModule<K> out(x.q, x.ranks);
    std::vector<std::size_t> offset(static_cast<std::size_t>(x.q.n) + 1, 0);
    for (int v = 0; v < x.q.n; ++v)
        offset[static_cast<std::size_t>(v) + 1] =
            offset[static_cast<std::size_t>(v)] + static_cast<std::size_t>(x.ranks[static_cast<std::size_t>(v)]);
    for (std::size_t m = 0; m < x.mats.size(); ++m) {
        const int u = x.q.arrows[m].src, w = x.q.arrows[m].tgt;
        for (std::size_t i = 0; i < x.mats[m].rows(); ++i)
            for (std::size_t j = 0; j < x.mats[m].cols(); ++j) {
                long long es = expo[offset[static_cast<std::size_t>(u)] + j];
                long long et = expo[offset[static_cast<std::size_t>(w)] + i];
                RatFunc<K> v = x.mats[m].at(i, j) * linear_power(a, es) /
                               linear_power(a, et);
                if (v.den.degree() != 0) return std::nullopt; /* leaves the lattice */
                out.mats[m].at(i, j) = v;
            }
    }
    return out;
}

} // namespace detail

/* Builds a polynomial module X with generic fiber isomorphic to xprime and
 * reductions inside the family's class at every listed closed point.
 * Discrete modules descend to a constant lift; homogeneous ones get a
 * denominator-cleared polynomial lift whose finitely many bad reductions are
 * repaired by a bounded sublattice search. */
template <FieldLike K>
GlueWitness<K> glue_witness(ARContext<K>& ck, ARContext<RatFunc<K>>& cK, const TorsionFamily<K>& f,
                            const Rep<RatFunc<K>>& xprime, const PrimeLabel<K>& q,
                            long long sublattice_bound = 4) {
    ARQ_REQUIRE(q.generic, "gluing targets the generic point only");
    ARQ_REQUIRE(!xprime.is_zero_rep(), "cannot glue the zero module");
    ARQ_REQUIRE(decompose(xprime).summands.size() == 1, "gluing needs an indecomposable module");
    ARQ_REQUIRE(handle_membership(cK, f.generic_handle, xprime),
                "the module is not a member of the family's generic handle");
    TorsionFamily<K> fam = f;
    fam.sort_assignments();

    GlueWitness<K> wit;
    wit.target = q;
    IndecDescriptor d = cK.describe(xprime);

    if (d.kind != DescKind::HomReg) {
        /* discrete descriptors descend to the base field verbatim */
        Rep<K> base = ck.realize(d);
        wit.x = constant_rqmodule(base);
        for (const auto& [a, h] : fam.assignments) {
            MembershipCert c;
            c.prime = prime_str(PrimeLabel<K>::closed(a));
            c.reduced_dims = base.dims;
            c.member = handle_membership(ck, h, base);
            if (!c.member)
                throw precondition_error("constant lift of " + d.str() +
                                         " is rejected at prime " + c.prime +
                                         "; the family is not compatible there");
            wit.certs.push_back(std::move(c));
        }
        if (auto fp = detail::fresh_point(fam)) {
            MembershipCert c;
            c.prime = "default";
            c.reduced_dims = base.dims;
            c.member = handle_membership(ck, fam.default_handle, base);
            if (!c.member)
                throw precondition_error("constant lift of " + d.str() +
                                         " is rejected by the default handle");
            wit.certs.push_back(std::move(c));
        }
    } else {
        wit.homogeneous_case = true;
        Rep<RatFunc<K>> real = cK.realize(d);
        RQModule<K> x = detail::polynomial_lift<K>(ck.q, real);
        std::size_t slots = 0;
        for (long long r : x.ranks) slots += static_cast<std::size_t>(r);
        for (const auto& [a, h] : fam.assignments) {
            std::string pname = prime_str(PrimeLabel<K>::closed(a));
            if (handle_membership(ck, h, x.reduce_at(a))) continue;
            /* repair this prime with a (t - a)-power sublattice */
            bool fixed = false;
            long long tried = 0;
            std::vector<long long> expo(slots, 0);
            std::function<bool(std::size_t, long long)> walk = [&](std::size_t pos,
                                                                   long long budget) -> bool {
                if (pos == slots) {
                    if (budget != 0) return false; /* each exponent vector exactly once */
                    if (++tried > 50000)
                        throw precondition_error(
                            "no valid lift found within the sublattice search bound at prime " +
                            pname);
                    auto cand = detail::sublattice_twist(x, a, expo);
                    if (!cand) return false;
                    if (handle_membership(ck, h, cand->reduce_at(a))) {
                        x = *cand;
                        return true;
                    }
                    return false;
                }
                for (long long e = 0; e <= std::min(budget, sublattice_bound); ++e) {
                    expo[pos] = e;
                    if (walk(pos + 1, budget - e)) return true;
                }
                expo[pos] = 0;
                return false;
            };
            for (long long total = 1;
                 total <= sublattice_bound * static_cast<long long>(slots) && !fixed; ++total)
                fixed = walk(0, total);
            if (!fixed)
                throw precondition_error(
                    "no valid lift found within the sublattice search bound at prime " + pname);
            wit.notes.push_back("sublattice correction applied at prime " + pname);
        }
        for (const auto& [a, h] : fam.assignments) {
            MembershipCert c;
            c.prime = prime_str(PrimeLabel<K>::closed(a));
            Rep<K> red = x.reduce_at(a);
            c.reduced_dims = red.dims;
            c.member = handle_membership(ck, h, red);
            ARQ_CHECK(c.member, "a previously repaired prime regressed during gluing");
            wit.certs.push_back(std::move(c));
        }
        if (auto fp = detail::fresh_point(fam)) {
            MembershipCert c;
            c.prime = "default";
            Rep<K> red = x.reduce_at(*fp);
            c.reduced_dims = red.dims;
            c.member = handle_membership(ck, fam.default_handle, red);
            if (!c.member)
                throw precondition_error("the lift's reduction at the unlisted point " +
                                         scalar_str(*fp) + " is rejected by the default handle");
            wit.certs.push_back(std::move(c));
        }
        wit.x = std::move(x);
    }

    auto iso = is_isomorphic(wit.x.generic_fiber(), xprime);
    ARQ_CHECK(iso.isomorphic, "glued module lost its generic fiber");
    wit.iso = std::move(iso.witness);
    return wit;
}

/* ---------------------------------------------------------------- *
 *  torsion closure of a set of modules, as a handle
 * ---------------------------------------------------------------- */

struct ClosureResult {
    TorsionHandle handle;
    std::vector<IndecDescriptor> members; /* verified members within the bound */
    std::vector<std::string> notes;
};

namespace detail {

/* is x a quotient of a finite sum of the given modules (trace test) */
template <FieldLike K>
bool generated_by(const std::vector<Rep<K>>& gens, const Rep<K>& x) {
    if (x.is_zero_rep()) return true;
    for (int v = 0; v < x.q.n; ++v) {
        std::size_t dv = static_cast<std::size_t>(x.dims[static_cast<std::size_t>(v)]);
        if (dv == 0) continue;
        std::vector<std::vector<K>> spans;
        for (const auto& m : gens)
            for (const auto& h : hom_space(m, x))
                for (std::size_t c = 0; c < h.comps[static_cast<std::size_t>(v)].cols(); ++c) {
                    std::vector<K> col(dv);
                    for (std::size_t r = 0; r < dv; ++r)
                        col[r] = h.comps[static_cast<std::size_t>(v)].at(r, c);
                    spans.push_back(std::move(col));
                }
        if (span_rank(spans, dv) < dv) return false;
    }
    return true;
}

} // namespace detail

/* Smallest torsion class containing the given modules, computed by a bounded
 * saturation (quotients of sums, and middles of extensions between members)
 * followed by recognition of the result as a handle.  Throws when no handle
 * within the bound can be certified. */
template <FieldLike K>
ClosureResult torsion_closure(ARContext<K>& ctx, const std::vector<Rep<K>>& seeds,
                              long long bound = 0) {
    if (bound <= 0)
        bound = ctx.extended() ? 2 * dim_total(ctx.type.delta) + 2 : 16;
    ClosureResult out;

    std::set<std::string> member_keys;
    std::vector<IndecDescriptor> members;
    std::vector<Rep<K>> realized;
    auto add_member = [&](const IndecDescriptor& d) {
        std::string k = d.str();
        if (member_keys.count(k)) return false;
        Rep<K> r = ctx.realize(d); /* may throw; keep the three stores in sync */
        member_keys.insert(k);
        members.push_back(d);
        realized.push_back(std::move(r));
        return true;
    };

    std::vector<IndecDescriptor> seed_descs;
    for (const auto& s : seeds) {
        if (s.is_zero_rep()) continue;
        for (const auto& d : detail::summand_descriptors(ctx, s)) {
            add_member(d);
            seed_descs.push_back(d);
        }
    }

    if (members.empty()) {
        /* closure of nothing: the zero class */
        SupportTauTiltingPair p;
        for (int v = 0; v < ctx.q.n; ++v) p.slots.push_back(PairSlot::supp(v));
        out.handle = TorsionHandle::ff(p.canonical());
        return out;
    }

    bool pencil_sweep = false;
    bool skipped_unnameable = false;
    auto universe = [&]() {
        std::vector<IndecDescriptor> u = ctx.descriptors_up_to(bound);
        if (ctx.extended()) {
            std::set<std::string> pts;
            for (const auto& d : members)
                if (d.kind == DescKind::HomReg) pts.insert(d.point);
            long long unit = dim_total(ctx.type.delta);
            for (const auto& p : pts) {
                long long degf = 1;
                if (p != "inf")
                    if (auto pp = point_poly<K>(p))
                        degf = std::max<long long>(1, pp->degree());
                for (long long l = 1; l * unit * degf <= bound; ++l)
                    u.push_back(IndecDescriptor::homreg(p, l));
            }
        }
        return u;
    };

    for (int pass = 0; pass < 8; ++pass) {
        bool grew = false;
        for (const auto& d : universe()) {
            if (member_keys.count(d.str())) continue;
            if (detail::generated_by(realized, ctx.realize(d))) grew |= add_member(d);
        }
        std::size_t fixed = realized.size();
        for (std::size_t i = 0; i < fixed; ++i)
            for (std::size_t j = 0; j < fixed; ++j) {
                /* by value: add_member growing `realized` must not invalidate these */
                Rep<K> sub = realized[i], quot = realized[j];
                if (dim_total(sub.dims) + dim_total(quot.dims) > bound) continue;
                auto basis = ext1_cocycle_basis(quot, sub);
                if (basis.empty()) continue;
                std::set<std::string> pencil_points;
                auto absorb = [&](const Cocycle<K>& z) {
                    Rep<K> mid = ext_middle(quot, sub, z).total;
                    std::vector<IndecDescriptor> ds;
                    try {
                        ds = detail::summand_descriptors(ctx, mid);
                    } catch (const precondition_error&) {
                        /* a summand at a higher-degree point this base cannot name */
                        skipped_unnameable = true;
                        return;
                    }
                    for (const auto& d : ds) {
                        if (d.kind == DescKind::HomReg) pencil_points.insert(d.point);
                        try {
                            grew |= add_member(d);
                        } catch (const precondition_error&) {
                            skipped_unnameable = true;
                        }
                    }
                };
                for (const auto& z : basis) absorb(z);
                if (basis.size() >= 2) {
                    Cocycle<K> mix = basis[0];
                    for (std::size_t a = 0; a < mix.per_arrow.size(); ++a)
                        mix.per_arrow[a] = mix.per_arrow[a] + basis[1].per_arrow[a];
                    absorb(mix);
                }
                if (pencil_points.size() >= 2) pencil_sweep = true;
            }
        if (!grew) break;
    }
    std::sort(members.begin(), members.end(), desc_less);
    realized.clear();
    for (const auto& d : members) realized.push_back(ctx.realize(d));
    out.members = members;
    if (skipped_unnameable)
        out.notes.push_back("extension middles at higher-degree points were left out of the "
                            "member sample (not realizable over this base field)");

    /* recognition, finitely generated form first */
    bool has_homog = false, has_pp = false;
    for (const auto& d : members) {
        has_homog |= d.kind == DescKind::HomReg;
        has_pp |= d.kind == DescKind::PP;
    }

    auto try_pair = [&](const std::vector<std::size_t>& order) -> std::optional<TorsionHandle> {
        std::vector<IndecDescriptor> chosen;
        std::vector<Rep<K>> reps, taus;
        for (std::size_t idx : order) {
            const IndecDescriptor& d = members[idx];
            if (d.kind == DescKind::HomReg) continue;
            Rep<K> r = realized[idx];
            Rep<K> t = tau_plus(r);
            bool ok = hom_dim(r, t) == 0;
            for (std::size_t i = 0; i < reps.size() && ok; ++i)
                ok = hom_dim(reps[i], t) == 0 && hom_dim(r, taus[i]) == 0;
            if (!ok) continue;
            chosen.push_back(d);
            reps.push_back(std::move(r));
            taus.push_back(std::move(t));
        }
        std::vector<int> supp;
        for (int v = 0; v < ctx.q.n; ++v) {
            bool zero = true;
            for (const auto& d : members)
                if (ctx.dims_of(d)[static_cast<std::size_t>(v)] != 0) zero = false;
            if (zero) supp.push_back(v);
        }
        if (chosen.size() + supp.size() != static_cast<std::size_t>(ctx.q.n)) return std::nullopt;
        SupportTauTiltingPair p;
        for (const auto& d : chosen) p.slots.push_back(PairSlot::module(d));
        for (int v : supp) p.slots.push_back(PairSlot::supp(v));
        p = p.canonical();
        if (!pair_valid(ctx, p)) return std::nullopt;
        for (const auto& r : realized)
            if (!detail::generated_by(reps, r)) return std::nullopt;
        return TorsionHandle::ff(p);
    };

    std::vector<std::size_t> asc(members.size());
    for (std::size_t i = 0; i < asc.size(); ++i) asc[i] = i;
    std::vector<std::size_t> seed_first = asc, desc = asc;
    std::set<std::string> seed_keys;
    for (const auto& d : seed_descs) seed_keys.insert(d.str());
    std::stable_sort(seed_first.begin(), seed_first.end(), [&](std::size_t x, std::size_t y) {
        return seed_keys.count(members[x].str()) > seed_keys.count(members[y].str());
    });
    std::reverse(desc.begin(), desc.end());
    for (const auto& order : {seed_first, asc, desc})
        if (auto h = try_pair(order)) {
            out.handle = *h;
            return out;
        }

    /* upper form: all preinjectives plus the collected regular content */
    ARQ_REQUIRE(ctx.extended() && (has_homog || pencil_sweep) && !has_pp,
                "torsion closure is not representable as a handle within bound " +
                    std::to_string(bound));
    ARQ_REQUIRE(!(skipped_unnameable && !pencil_sweep),
                "torsion closure contains homogeneous content at higher-degree points that "
                "this base field cannot enumerate");
    RegularSpec rs;
    rs.all_homog = pencil_sweep;
    auto tubes = ctx.tubes();
    std::set<std::string> point_set;
    for (const auto& d : members) {
        if (d.kind == DescKind::HomReg && !rs.all_homog)
            point_set.insert(canonical_point<K>(d.point));
        if (d.kind == DescKind::Reg) rs.tube_map[d.tube].gens.push_back(d);
    }
    rs.points.assign(point_set.begin(), point_set.end());
    for (auto& [idx, ts] : rs.tube_map)
        if (detail::spec_covers_whole(ts, tubes[static_cast<std::size_t>(idx)].rank)) {
            ts.whole = true;
            ts.gens.clear();
        }
    if (pencil_sweep)
        out.notes.push_back("a pencil of extension middles swept distinct homogeneous points; "
                            "recording the whole homogeneous family");
    TorsionHandle h = TorsionHandle::upper(rs);
    for (std::size_t i = 0; i < members.size(); ++i)
        ARQ_CHECK(handle_membership(ctx, h, realized[i]),
                  "saturated member escaped the recognized upper handle");
    out.notes.push_back("preinjective content asserted from the homogeneous climb; members "
                        "within the bound verified");
    out.handle = h;
    return out;
}

/* ---------------------------------------------------------------- *
 *  phi_t: polynomial modules to families of fiberwise closures
 * ---------------------------------------------------------------- */

namespace detail {

/* closed points where some arrow matrix drops below its generic rank */
template <FieldLike K>
std::vector<K> degeneracy_points(const RQModule<K>& x) {
    std::vector<K> out;
    for (const auto& m : x.mats) {
        std::size_t r = rank(m);
        if (r == 0) continue;
        /* gcd of all r-by-r minors vanishes exactly at the rank drops */
        Poly<K> g = Poly<K>::zero();
        std::vector<std::size_t> rsel, csel;
        std::function<void(std::size_t, std::size_t, bool)> pick = [&](std::size_t start,
                                                                       std::size_t left,
                                                                       bool rows) {
            if (left == 0) {
                if (rows) {
                    pick(0, r, false);
                    return;
                }
                Matrix<RatFunc<K>> sub(r, r);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) sub.at(i, j) = m.at(rsel[i], csel[j]);
                RatFunc<K> d = det(sub);
                if (!arq::is_zero(d)) g = poly_gcd(g, d.num);
                return;
            }
            std::size_t n = rows ? m.rows() : m.cols();
            auto& sel = rows ? rsel : csel;
            for (std::size_t i = start; i + left <= n; ++i) {
                sel.push_back(i);
                pick(i + 1, left - 1, rows);
                sel.pop_back();
            }
        };
        pick(0, r, true);
        for (const K& a : rational_roots(g)) out.push_back(a);
    }
    std::sort(out.begin(), out.end(), [](const K& a, const K& b) {
        return scalar_str(a) < scalar_str(b);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/* turn a handle over k(t) into one over k: descriptors carry over verbatim;
 * a homogeneous point descends when its label does not involve t */
template <FieldLike K>
TorsionHandle descend_handle(const TorsionHandle& h, std::vector<std::string>& notes) {
    if (h.kind == TorsionHandle::Kind::FF) return h;
    RegularSpec rs;
    rs.tube_map = h.reg.tube_map;
    rs.all_homog = h.reg.all_homog;
    for (const auto& p : h.reg.points) {
        auto pp = point_poly<RatFunc<K>>(p);
        if (!pp) {
            rs.points.push_back("inf");
            continue;
        }
        bool constant = true;
        std::vector<K> coeffs;
        for (int i = 0; i <= pp->degree(); ++i) {
            RatFunc<K> c = pp->coeff(i);
            if (c.den.degree() != 0 || c.num.degree() > 0) {
                constant = false;
                break;
            }
            coeffs.push_back(c.num.is_zero() ? field_traits<K>::zero()
                                             : c.num.coeff(0) / c.den.coeff(0));
        }
        if (constant) {
            rs.points.push_back(
                canonical_point<K>(poly_str(Poly<K>::from_coeffs(coeffs), poly_var<K>())));
        } else {
            rs.all_homog = true;
            notes.push_back("generic homogeneous point " + p +
                            " varies with t; the default covers the whole homogeneous family");
        }
    }
    if (rs.all_homog) rs.points.clear();
    return TorsionHandle::upper(rs);
}

} // namespace detail

template <FieldLike K>
struct PhiTResult {
    TorsionFamily<K> family;
    std::vector<std::string> notes;
};

/* the family of torsion closures of the generators' fibers: closures at every
 * degenerate rational point and at the generic point, with the descended
 * generic closure as the default elsewhere */
template <FieldLike K>
PhiTResult<K> phi_t(ARContext<K>& ck, ARContext<RatFunc<K>>& cK,
                    const std::vector<RQModule<K>>& generators, long long bound = 0) {
    ARQ_REQUIRE(!generators.empty(), "phi_t needs at least one generator");
    for (const auto& g : generators) {
        g.validate();
        ARQ_REQUIRE(g.q.n == ck.q.n && g.q.arrows.size() == ck.q.arrows.size(),
                    "generator lives on a different quiver");
    }
    PhiTResult<K> out;
    std::vector<K> listed;
    for (const auto& g : generators)
        for (const K& a : detail::degeneracy_points(g)) listed.push_back(a);
    std::sort(listed.begin(), listed.end(),
              [](const K& a, const K& b) { return scalar_str(a) < scalar_str(b); });
    listed.erase(std::unique(listed.begin(), listed.end()), listed.end());

    auto closure_at = [&](const K& a) {
        std::vector<Rep<K>> seeds;
        for (const auto& g : generators) seeds.push_back(g.reduce_at(a));
        try {
            return torsion_closure(ck, seeds, bound);
        } catch (const precondition_error& e) {
            throw precondition_error("reduction fails to generate a representable handle at " +
                                     prime_str(PrimeLabel<K>::closed(a)) + ": " + e.what());
        }
    };

    for (const K& a : listed) {
        ClosureResult c = closure_at(a);
        out.family.assignments.emplace_back(a, c.handle);
        for (const auto& n : c.notes)
            out.notes.push_back(prime_str(PrimeLabel<K>::closed(a)) + ": " + n);
    }

    std::vector<Rep<RatFunc<K>>> fibers;
    for (const auto& g : generators) fibers.push_back(g.generic_fiber());
    ClosureResult gen;
    try {
        gen = torsion_closure(cK, fibers, bound);
    } catch (const precondition_error& e) {
        throw precondition_error(
            std::string("reduction fails to generate a representable handle at (0): ") + e.what());
    }
    out.family.generic_handle = gen.handle;
    for (const auto& n : gen.notes) out.notes.push_back("(0): " + n);

    out.family.default_handle = detail::descend_handle<K>(gen.handle, out.notes);
    out.family.sort_assignments();
    return out;
}

/* ---------------------------------------------------------------- *
 *  pointwise family containment and the gluing round trip
 * ---------------------------------------------------------------- */

struct FamilyContainment {
    bool contained = false;
    std::vector<CompatEntry> entries;
};

/* is every handle of `a` contained in the matching handle of `b` */
template <FieldLike K>
FamilyContainment family_leq(ARContext<K>& ck, ARContext<RatFunc<K>>& cK,
                             const TorsionFamily<K>& a, const TorsionFamily<K>& b,
                             long long bound = 0) {
    FamilyContainment out;
    out.contained = true;
    auto push = [&](const std::string& label, const Containment& c) {
        CompatEntry e;
        e.prime = label;
        e.ok = c.contained;
        e.witness = c.witness;
        e.notes = c.notes;
        if (!c.contained) out.contained = false;
        out.entries.push_back(std::move(e));
    };
    push("(0)", handle_leq_report(cK, a.generic_handle, b.generic_handle, bound));
    std::vector<K> pts;
    for (const auto& [x, h] : a.assignments) pts.push_back(x);
    for (const auto& [x, h] : b.assignments) pts.push_back(x);
    std::sort(pts.begin(), pts.end(),
              [](const K& x, const K& y) { return scalar_str(x) < scalar_str(y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const K& x : pts)
        push(prime_str(PrimeLabel<K>::closed(x)),
             handle_leq_report(ck, a.at_point(x), b.at_point(x), bound));
    push("default", handle_leq_report(ck, a.default_handle, b.default_handle, bound));
    return out;
}

struct TheoremSample {
    std::string descriptor;
    bool homogeneous_case = false;
    bool certs_ok = false;
};

struct MainTheoremReport {
    bool pass = false;
    std::vector<TheoremSample> samples;
    FamilyContainment round_trip;
    std::vector<std::string> notes;
};

/* Samples indecomposables from the generic handle, glues each into a
 * polynomial module, and checks that the family generated by the witnesses
 * sits inside the original one at every prime. */
template <FieldLike K>
MainTheoremReport verify_main_theorem(ARContext<K>& ck, ARContext<RatFunc<K>>& cK,
                                      const TorsionFamily<K>& f, int samples,
                                      long long bound = 0, long long sublattice_bound = 4) {
    ARQ_REQUIRE(samples >= 1, "need at least one sample");
    CompatReport comp = is_compatible(ck, cK, f, bound);
    ARQ_REQUIRE(comp.compatible, "the family must be compatible before gluing");

    long long sample_bound = bound > 0 ? bound : 2 * dim_total(cK.type.delta);
    std::vector<Rep<RatFunc<K>>> picks;
    std::vector<IndecDescriptor> pick_descs;
    for (const auto& d : cK.descriptors_up_to(sample_bound)) {
        if (static_cast<int>(picks.size()) >= samples) break;
        Rep<RatFunc<K>> r = cK.realize(d);
        if (handle_membership(cK, f.generic_handle, r)) {
            picks.push_back(std::move(r));
            pick_descs.push_back(d);
        }
    }
    if (static_cast<int>(picks.size()) < samples && cK.extended()) {
        std::vector<std::string> labels;
        if (f.generic_handle.kind == TorsionHandle::Kind::Upper) {
            if (f.generic_handle.reg.all_homog)
                labels = detail::sample_point_labels<RatFunc<K>>(3);
            else
                labels = f.generic_handle.reg.points;
        } else {
            labels = detail::sample_point_labels<RatFunc<K>>(2);
        }
        for (const auto& p : labels)
            for (long long l = 1; l <= 2 && static_cast<int>(picks.size()) < samples; ++l) {
                IndecDescriptor d = IndecDescriptor::homreg(canonical_point<RatFunc<K>>(p), l);
                Rep<RatFunc<K>> r = cK.realize(d);
                if (handle_membership(cK, f.generic_handle, r)) {
                    picks.push_back(std::move(r));
                    pick_descs.push_back(d);
                }
            }
    }
    ARQ_REQUIRE(!picks.empty(), "the generic handle has no members within the sample bound");

    MainTheoremReport rep;
    std::vector<RQModule<K>> witnesses;
    for (std::size_t i = 0; i < picks.size(); ++i) {
        GlueWitness<K> w =
            glue_witness(ck, cK, f, picks[i], PrimeLabel<K>::generic_label(), sublattice_bound);
        TheoremSample s;
        s.descriptor = pick_descs[i].str();
        s.homogeneous_case = w.homogeneous_case;
        s.certs_ok = w.all_certs_pass();
        rep.samples.push_back(s);
        witnesses.push_back(std::move(w.x));
    }
    PhiTResult<K> phi = phi_t(ck, cK, witnesses, bound);
    for (const auto& n : phi.notes) rep.notes.push_back(n);
    rep.round_trip = family_leq(ck, cK, phi.family, f, bound);
    rep.pass = rep.round_trip.contained;
    for (const auto& s : rep.samples) rep.pass = rep.pass && s.certs_ok;
    return rep;
}

} // namespace arq
