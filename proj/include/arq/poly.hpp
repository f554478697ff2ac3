#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arq/error.hpp"
#include "arq/scalar.hpp"

namespace arq {

inline constexpr long VAL_INF = std::numeric_limits<long>::max();

/* Dense univariate polynomial over a field; coefficient list with no trailing zeros. */
template <FieldLike K>
struct Poly {
    std::vector<K> c; /* c[i] multiplies x^i; empty vector is the zero polynomial */

    Poly() = default;
    explicit Poly(K k) {
        if (!arq::is_zero(k)) c.push_back(k);
    }
    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(field_traits<K>::one()); }
    static Poly x() { return from_coeffs({field_traits<K>::zero(), field_traits<K>::one()}); }
    static Poly from_coeffs(std::vector<K> cs) {
        Poly p;
        p.c = std::move(cs);
        p.trim();
        return p;
    }

    void trim() {
        while (!c.empty() && arq::is_zero(c.back())) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    K lead() const {
        ARQ_CHECK(!c.empty(), "lead of zero polynomial");
        return c.back();
    }
    K coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)]
                                                         : field_traits<K>::zero();
    }
    /* order of vanishing at 0; VAL_INF for the zero polynomial */
    long ord() const {
        for (size_t i = 0; i < c.size(); ++i)
            if (!arq::is_zero(c[i])) return static_cast<long>(i);
        return VAL_INF;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<K> r(std::max(a.c.size(), b.c.size()), field_traits<K>::zero());
        for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return from_coeffs(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<K> r(std::max(a.c.size(), b.c.size()), field_traits<K>::zero());
        for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
        return from_coeffs(std::move(r));
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& k : r.c) k = -k;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<K> r(a.c.size() + b.c.size() - 1, field_traits<K>::zero());
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return from_coeffs(std::move(r));
    }
    friend Poly operator*(const K& k, const Poly& p) {
        Poly r = p;
        for (auto& x : r.c) x = k * x;
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    K eval(const K& x) const {
        K acc = field_traits<K>::zero();
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    Poly monic() const {
        ARQ_CHECK(!is_zero(), "monic of zero polynomial");
        K inv = field_traits<K>::one() / lead();
        return inv * (*this);
    }

    Poly derivative() const {
        if (c.size() <= 1) return zero();
        std::vector<K> r(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) {
            K m = field_traits<K>::zero();
            for (size_t j = 0; j < i; ++j) m += field_traits<K>::one(); /* i as field element */
            r[i - 1] = m * c[i];
        }
        return from_coeffs(std::move(r));
    }

    /* multiply by x^k */
    Poly shifted(int k) const {
        if (is_zero()) return zero();
        std::vector<K> r(c.size() + static_cast<size_t>(k), field_traits<K>::zero());
        for (size_t i = 0; i < c.size(); ++i) r[i + static_cast<size_t>(k)] = c[i];
        return from_coeffs(std::move(r));
    }
};

template <FieldLike K>
std::pair<Poly<K>, Poly<K>> poly_divmod(const Poly<K>& a, const Poly<K>& b) {
    ARQ_CHECK(!b.is_zero(), "polynomial division by zero");
    Poly<K> q, r = a;
    if (a.degree() < b.degree()) return {q, r};
    q.c.assign(static_cast<size_t>(a.degree() - b.degree() + 1), field_traits<K>::zero());
    K lb = field_traits<K>::one() / b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int d = r.degree() - b.degree();
        K f = r.lead() * lb;
        q.c[static_cast<size_t>(d)] = f;
        r = r - f * b.shifted(d);
    }
    q.trim();
    return {q, r};
}

template <FieldLike K>
Poly<K> operator/(const Poly<K>& a, const Poly<K>& b) {
    return poly_divmod(a, b).first;
}
template <FieldLike K>
Poly<K> operator%(const Poly<K>& a, const Poly<K>& b) {
    return poly_divmod(a, b).second;
}

/* monic gcd; gcd(0,0) = 0 */
template <FieldLike K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

template <FieldLike K>
Poly<K> poly_pow(const Poly<K>& p, int e) {
    Poly<K> acc = Poly<K>::one(), base = p;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

/* Reduced fraction of polynomials; denominator monic and nonzero. */
template <FieldLike K>
struct RatFunc {
    Poly<K> num, den;

    RatFunc() : num(), den(Poly<K>::one()) {}
    RatFunc(long long n) : num(Poly<K>(K(n))), den(Poly<K>::one()) {}
    explicit RatFunc(Poly<K> n) : num(std::move(n)), den(Poly<K>::one()) {}
    RatFunc(Poly<K> n, Poly<K> d) : num(std::move(n)), den(std::move(d)) { reduce(); }
    static RatFunc constant(const K& k) { return RatFunc(Poly<K>(k)); }
    static RatFunc t() { return RatFunc(Poly<K>::x()); }

    void reduce() {
        ARQ_CHECK(!den.is_zero(), "rational function with zero denominator");
        if (num.is_zero()) {
            den = Poly<K>::one();
            return;
        }
        auto g = poly_gcd(num, den);
        if (g.degree() > 0) {
            num = num / g;
            den = den / g;
        }
        K lc = den.lead();
        if (!(lc == field_traits<K>::one())) {
            K inv = field_traits<K>::one() / lc;
            num = inv * num;
            den = inv * den;
        }
    }

    bool is_zero() const { return num.is_zero(); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        ARQ_CHECK(!b.is_zero(), "division by zero rational function");
        return RatFunc(a.num * b.den, a.den * b.num);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /* t-adic valuation at the origin (uniformizer t); VAL_INF for 0 */
    long val0() const {
        if (num.is_zero()) return VAL_INF;
        return num.ord() - den.ord();
    }
    /* true when the denominator does not vanish at t = 0, i.e. the element lies in k[t]_(t) */
    bool in_dvr() const { return num.is_zero() || val0() >= 0; }

    bool defined_at(const K& a) const { return !arq::is_zero(den.eval(a)); }
    K eval(const K& a) const {
        K d = den.eval(a);
        ARQ_REQUIRE(!arq::is_zero(d), "rational function has a pole at the evaluation point");
        return num.eval(a) / d;
    }
};

template <FieldLike K>
struct field_traits<RatFunc<K>> {
    using base = K;
    static RatFunc<K> zero() { return RatFunc<K>(); }
    static RatFunc<K> one() { return RatFunc<K>(1); }
    static bool is_zero(const RatFunc<K>& x) { return x.is_zero(); }
    static std::string name() { return field_traits<K>::name() + "(t)"; }
    static constexpr bool is_rational_function = true;
    static constexpr bool finite = false;
};

/* --- helpers used by splitting / point-label logic ------------------------------- */

/* Grow a divisor d of m to an exact coprime split m = a * b with gcd(a,b) = 1.
 * Returns {a, b} with both nonconstant, or nullopt when d absorbs all of m. */
template <FieldLike K>
std::optional<std::pair<Poly<K>, Poly<K>>> coprime_split(const Poly<K>& m, const Poly<K>& d) {
    if (d.degree() <= 0 || d.degree() >= m.degree()) return std::nullopt;
    ARQ_CHECK((m % d).is_zero(), "coprime_split: d must divide m");
    Poly<K> a = d.monic();
    for (;;) {
        Poly<K> b = m.monic() / a;
        auto g = poly_gcd(a, b);
        if (g.degree() == 0) {
            if (b.degree() == 0) return std::nullopt;
            return std::make_pair(a, b);
        }
        a = a * g;
    }
}

} // namespace arq
