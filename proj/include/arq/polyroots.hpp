#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "arq/poly.hpp"
#include "arq/scalar.hpp"

/* Exact root finding and small-degree factorization.  Complete over the prime
 * fields (exhaustive search) and, over Q, complete through degree 4 after
 * rational-root stripping; anything deeper raises a precondition error rather
 * than guessing. */

namespace arq {

/* deterministic ordering used when listing roots / eigenvalues */
template <class K>
bool scalar_less(const K& a, const K& b) {
    if constexpr (field_traits<K>::finite) {
        return a.v < b.v;
    } else {
        return a < b;
    }
}

/* --- integer support for the rational-root theorem ------------------------------- */

/* trial division up to 10^5, then a primality test on the cofactor; a composite
 * cofactor is kept as a single atom (inputs here are tiny characteristic
 * polynomial coefficients, far below that regime) */
inline std::vector<std::pair<BigInt, int>> factor_bigint(BigInt n) {
    std::vector<std::pair<BigInt, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (BigInt p = 2; p <= 100000 && p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<BigInt> divisors_of(const BigInt& n, std::size_t cap = 20000) {
    std::vector<BigInt> divs{1};
    for (const auto& [p, e] : factor_bigint(n)) {
        std::vector<BigInt> next;
        BigInt pk = 1;
        for (int k = 0; k <= e; ++k) {
            for (const auto& d : divs) next.push_back(d * pk);
            pk *= p;
        }
        divs = std::move(next);
        if (divs.size() > cap) throw precondition_error("divisor enumeration too large for root search");
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

/* --- roots ---------------------------------------------------------------------- */

inline std::vector<Rat> find_roots_rat(const Poly<Rat>& f0) {
    std::vector<Rat> roots;
    if (f0.degree() <= 0) return roots;
    /* clear denominators */
    BigInt L = 1;
    for (const auto& c : f0.c) L = lcm(L, rat_den(c));
    std::vector<BigInt> a(f0.c.size());
    for (size_t i = 0; i < f0.c.size(); ++i) a[i] = rat_num(f0.c[i] * Rat(L));
    size_t lo = 0;
    while (lo < a.size() && a[lo] == 0) ++lo;
    if (lo > 0) roots.push_back(Rat(0));
    if (lo + 1 >= a.size()) {
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    BigInt a0 = a[lo], ad = a.back();
    auto ps = divisors_of(a0), qs = divisors_of(ad);
    for (const auto& p : ps)
        for (const auto& q : qs) {
            if (gcd(p, q) != 1) continue;
            for (int s : {1, -1}) {
                Rat r(s * p, q);
                if (f0.eval(r) == 0) roots.push_back(r);
            }
        }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

template <FieldLike F>
std::vector<RatFunc<F>> find_roots_ratfunc(const Poly<RatFunc<F>>& f);

template <FieldLike K>
std::vector<K> find_roots(const Poly<K>& f) {
    if constexpr (field_traits<K>::finite) {
        std::vector<K> roots;
        for (std::uint64_t i = 0; i < field_traits<K>::order; ++i) {
            K x = field_traits<K>::element(i);
            if (arq::is_zero(f.eval(x))) roots.push_back(x);
        }
        return roots;
    } else if constexpr (std::is_same_v<K, Rat>) {
        return find_roots_rat(f);
    } else if constexpr (field_traits<K>::is_rational_function) {
        return find_roots_ratfunc(f);
    } else {
        throw precondition_error("root finding is only supported over Q and the prime fields");
    }
}

template <FieldLike K>
int root_multiplicity(Poly<K> f, const K& r) {
    Poly<K> lin = Poly<K>::from_coeffs({-r, field_traits<K>::one()});
    int m = 0;
    while (f.degree() > 0 && arq::is_zero(f.eval(r))) {
        f = f / lin;
        ++m;
    }
    return m;
}

/* --- radical (squarefree part), valid in any characteristic over Q / F_p --------- */

template <FieldLike K>
Poly<K> poly_radical(const Poly<K>& f) {
    if (f.degree() <= 0) return Poly<K>::one();
    Poly<K> d = f.derivative();
    if (d.is_zero()) {
        if constexpr (field_traits<K>::finite) {
            /* f = g(x^p); over the prime field g's coefficients are their own p-th roots */
            const auto p = field_traits<K>::order;
            std::vector<K> gc;
            for (size_t i = 0; i < f.c.size(); i += p) gc.push_back(f.c[i]);
            return poly_radical(Poly<K>::from_coeffs(std::move(gc)));
        } else {
            ARQ_CHECK(false, "zero derivative of a nonconstant polynomial in characteristic 0");
        }
    }
    Poly<K> g = poly_gcd(f, d);
    if (g.degree() == 0) return f.monic();
    Poly<K> ra = poly_radical(g), rb = poly_radical(f / g);
    return (ra * rb) / poly_gcd(ra, rb);
}

/* --- complete factorization helpers ---------------------------------------------- */

inline std::optional<Rat> rat_sqrt(const Rat& x) {
    if (x < 0) return std::nullopt;
    BigInt n = rat_num(x), d = rat_den(x);
    BigInt sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return Rat(sn, sd);
}

/* f(alpha*x + beta) */
template <FieldLike K>
Poly<K> compose_linear(const Poly<K>& f, const K& alpha, const K& beta) {
    Poly<K> arg = Poly<K>::from_coeffs({beta, alpha});
    Poly<K> acc = Poly<K>::zero();
    for (size_t i = f.c.size(); i-- > 0;) acc = acc * arg + Poly<K>(f.c[i]);
    return acc;
}

/* monic quartic into two monic quadratics over Q, if such a split exists */
inline std::optional<std::pair<Poly<Rat>, Poly<Rat>>> split_quartic_rat(const Poly<Rat>& f) {
    ARQ_CHECK(f.degree() == 4, "split_quartic_rat expects degree 4");
    Poly<Rat> m = f.monic();
    Rat c3 = m.coeff(3);
    Rat shift = -c3 / 4;
    Poly<Rat> g = compose_linear(m, Rat(1), shift); /* depressed: y^4 + p y^2 + q y + r */
    Rat p = g.coeff(2), q = g.coeff(1), r = g.coeff(0);
    /* resolvent cubic z^3 - p z^2 - 4 r z + (4 p r - q^2) */
    Poly<Rat> res = Poly<Rat>::from_coeffs({4 * p * r - q * q, -4 * r, -p, Rat(1)});
    for (const Rat& z : find_roots_rat(res)) {
        Rat u2 = z - p;
        if (u2 == 0) {
            if (q != 0) continue; /* u = 0 forces the odd coefficient to vanish */
            auto s = rat_sqrt(p * p - 4 * r);
            if (!s) continue;
            Rat v = (p - *s) / 2, w = (p + *s) / 2;
            Poly<Rat> f1 = Poly<Rat>::from_coeffs({v, Rat(0), Rat(1)});
            Poly<Rat> f2 = Poly<Rat>::from_coeffs({w, Rat(0), Rat(1)});
            Rat back = -shift;
            return std::make_pair(compose_linear(f1, Rat(1), back), compose_linear(f2, Rat(1), back));
        }
        auto u = rat_sqrt(u2);
        if (!u) continue;
        Rat v = (z - q / *u) / 2, w = (z + q / *u) / 2;
        Poly<Rat> f1 = Poly<Rat>::from_coeffs({v, *u, Rat(1)});
        Poly<Rat> f2 = Poly<Rat>::from_coeffs({w, -*u, Rat(1)});
        if (!(f1 * f2 == g)) continue;
        Rat back = -shift;
        return std::make_pair(compose_linear(f1, Rat(1), back), compose_linear(f2, Rat(1), back));
    }
    return std::nullopt;
}

/* factor a monic squarefree rational polynomial into monic irreducibles;
 * supported through degree 4 once rational roots are stripped */
inline std::vector<Poly<Rat>> factor_squarefree_rat(const Poly<Rat>& f) {
    std::vector<Poly<Rat>> out;
    Poly<Rat> rest = f.monic();
    for (const Rat& r : find_roots_rat(rest)) {
        Poly<Rat> lin = Poly<Rat>::from_coeffs({-r, Rat(1)});
        while (rest.degree() > 0 && arq::is_zero(rest.eval(r))) {
            out.push_back(lin);
            rest = rest / lin;
        }
    }
    switch (rest.degree()) {
        case 0: break;
        case 1: out.push_back(rest); break;
        case 2:
        case 3: out.push_back(rest); break; /* no rational root => irreducible */
        case 4: {
            if (auto sp = split_quartic_rat(rest)) {
                out.push_back(sp->first);
                out.push_back(sp->second);
            } else {
                out.push_back(rest);
            }
            break;
        }
        default:
            throw precondition_error("irreducible factorization over Q is supported only up to degree 4");
    }
    return out;
}

/* enumerate monic polynomials of a fixed degree over a finite prime field */
template <FieldLike K>
void monic_polys_of_degree(int d, const std::function<bool(const Poly<K>&)>& visit) {
    static_assert(field_traits<K>::finite);
    const std::uint64_t P = field_traits<K>::order;
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= P;
        ARQ_REQUIRE(total <= 400000, "finite-field factor search space too large");
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<K> cs(static_cast<size_t>(d) + 1, field_traits<K>::zero());
        std::uint64_t x = code;
        for (int i = 0; i < d; ++i) {
            cs[static_cast<size_t>(i)] = field_traits<K>::element(x % P);
            x /= P;
        }
        cs[static_cast<size_t>(d)] = field_traits<K>::one();
        if (!visit(Poly<K>::from_coeffs(std::move(cs)))) return;
    }
}

/* complete trial-division factorization over a finite prime field */
template <FieldLike K>
std::vector<std::pair<Poly<K>, int>> factor_complete_fp(const Poly<K>& f) {
    static_assert(field_traits<K>::finite);
    std::vector<std::pair<Poly<K>, int>> out;
    Poly<K> rest = f.monic();
    for (int d = 1; rest.degree() > 0 && d <= rest.degree() / 2; ++d) {
        bool again = true;
        while (again && rest.degree() >= 2 * d) {
            again = false;
            monic_polys_of_degree<K>(d, [&](const Poly<K>& cand) {
                if ((rest % cand).is_zero()) {
                    int e = 0;
                    while ((rest % cand).is_zero()) {
                        rest = rest / cand;
                        ++e;
                    }
                    out.emplace_back(cand, e);
                    again = true;
                    return false;
                }
                return true;
            });
        }
    }
    if (rest.degree() > 0) out.emplace_back(rest, 1);
    return out;
}

/* Yun's squarefree decomposition (characteristic 0): f = prod a_i^i */
inline std::vector<std::pair<Poly<Rat>, int>> squarefree_decompose_rat(const Poly<Rat>& f0) {
    std::vector<std::pair<Poly<Rat>, int>> out;
    Poly<Rat> f = f0.monic();
    if (f.degree() <= 0) return out;
    Poly<Rat> d = f.derivative();
    Poly<Rat> a = poly_gcd(f, d);
    Poly<Rat> b = f / a, c = d / a, dd = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Poly<Rat> ai = poly_gcd(b, dd);
        if (ai.degree() > 0) out.emplace_back(ai, i);
        b = b / ai;
        c = dd / ai;
        dd = c - b.derivative();
        ++i;
    }
    return out;
}

/* irreducible factorization with multiplicities; complete over F_p, and over Q
 * complete through per-squarefree-part degree 4 */
template <FieldLike K>
std::vector<std::pair<Poly<K>, int>> factor_complete(const Poly<K>& f) {
    ARQ_REQUIRE(f.degree() >= 1, "cannot factor a constant polynomial");
    if constexpr (field_traits<K>::finite) {
        auto out = factor_complete_fp(f);
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
            for (int i = x.first.degree(); i >= 0; --i) {
                auto a = x.first.coeff(i).v, b = y.first.coeff(i).v;
                if (a != b) return a < b;
            }
            return false;
        });
        return out;
    } else if constexpr (std::is_same_v<K, Rat>) {
        std::vector<std::pair<Poly<Rat>, int>> out;
        for (const auto& [sf, mult] : squarefree_decompose_rat(f))
            for (const auto& irr : factor_squarefree_rat(sf)) out.emplace_back(irr, mult);
        std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
            if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
            for (int i = x.first.degree(); i >= 0; --i) {
                const Rat a = x.first.coeff(i), b = y.first.coeff(i);
                if (a != b) return a < b;
            }
            return false;
        });
        return out;
    } else {
        throw precondition_error("irreducible factorization is only supported over Q and the prime fields");
    }
}

/* --- roots in a rational function field ------------------------------------------- */

/* All monic divisors of a nonzero polynomial, up to a search budget. */
template <FieldLike F>
std::vector<Poly<F>> monic_divisors(const Poly<F>& f, size_t budget) {
    std::vector<Poly<F>> divs{Poly<F>::one()};
    if (f.degree() < 1) return divs;
    for (const auto& [p, e] : factor_complete(f)) {
        std::vector<Poly<F>> next;
        Poly<F> pk = Poly<F>::one();
        for (int k = 0; k <= e; ++k) {
            for (const auto& d : divs) next.push_back(d * pk);
            pk = pk * p;
        }
        divs = std::move(next);
        ARQ_REQUIRE(divs.size() <= budget, "divisor enumeration exceeded its search budget");
    }
    return divs;
}

/* Rational-root search over k(t).  Any root of f is c * p / q where p and q are
 * monic divisors of the trailing / leading k[t]-coefficients (after clearing
 * denominators) and c is a nonzero base-field constant; for each candidate
 * shape (p, q) the admissible constants are the common roots of the
 * t-coefficient polynomials of  sum_i  c^i g_i p^i q^(n-i). */
template <FieldLike F>
std::vector<RatFunc<F>> find_roots_ratfunc(const Poly<RatFunc<F>>& f0) {
    using RF = RatFunc<F>;
    std::vector<RF> roots;
    if (f0.degree() <= 0) return roots;
    size_t lo = 0;
    while (lo < f0.c.size() && f0.c[lo].is_zero()) ++lo;
    if (lo > 0) roots.push_back(RF());
    std::vector<RF> cs(f0.c.begin() + static_cast<long>(lo), f0.c.end());
    if (cs.size() <= 1) return roots;

    Poly<F> den = Poly<F>::one();
    for (const auto& a : cs) den = (den * a.den) / poly_gcd(den, a.den);
    std::vector<Poly<F>> g;
    for (const auto& a : cs) g.push_back(a.num * (den / a.den));
    const size_t n = g.size() - 1;

    auto ps = monic_divisors(g[0], 512), qs = monic_divisors(g[n], 512);
    ARQ_REQUIRE(ps.size() * qs.size() <= 4096,
                "root search over the function field exceeded its budget");
    for (const auto& p : ps)
        for (const auto& q : qs) {
            if (poly_gcd(p, q).degree() > 0) continue;
            std::vector<Poly<F>> pw{Poly<F>::one()}, qw{Poly<F>::one()};
            for (size_t i = 0; i < n; ++i) {
                pw.push_back(pw.back() * p);
                qw.push_back(qw.back() * q);
            }
            std::vector<Poly<F>> h;
            long maxdeg = 0;
            for (size_t i = 0; i <= n; ++i) {
                h.push_back(g[i] * pw[i] * qw[n - i]);
                maxdeg = std::max(maxdeg, static_cast<long>(h.back().degree()));
            }
            Poly<F> gc = Poly<F>::zero();
            bool blocked = false;
            for (long j = 0; j <= maxdeg && !blocked; ++j) {
                std::vector<F> row;
                for (size_t i = 0; i <= n; ++i) row.push_back(h[i].coeff(static_cast<int>(j)));
                Poly<F> rj = Poly<F>::from_coeffs(std::move(row));
                if (rj.is_zero()) continue;
                gc = gc.is_zero() ? rj.monic() : poly_gcd(gc, rj);
                if (gc.degree() == 0) blocked = true;
            }
            ARQ_CHECK(!gc.is_zero(), "nonzero polynomial cannot vanish at every constant");
            if (blocked || gc.degree() == 0) continue;
            for (const F& cv : find_roots(gc)) {
                if (arq::is_zero(cv)) continue;
                RF alpha(cv * p, q);
                if (!arq::is_zero(f0.eval(alpha))) continue;
                bool dup = false;
                for (const auto& r : roots) dup = dup || r == alpha;
                if (!dup) roots.push_back(alpha);
            }
        }
    return roots;
}

} // namespace arq
