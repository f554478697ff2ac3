#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <type_traits>

#include "arq/error.hpp"

namespace arq {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& x) { return numerator(x); }
inline BigInt rat_den(const Rat& x) { return denominator(x); }

/* Prime field F_P with compile-time modulus; elements stored reduced in [0, P). */
template <std::uint64_t P>
struct Fp {
    std::uint64_t v = 0;

    Fp() = default;
    Fp(long long x) {
        long long r = x % static_cast<long long>(P);
        if (r < 0) r += static_cast<long long>(P);
        v = static_cast<std::uint64_t>(r);
    }
    explicit Fp(const BigInt& x) {
        BigInt r = x % P;
        if (r < 0) r += P;
        v = r.convert_to<std::uint64_t>();
    }

    friend Fp operator+(Fp a, Fp b) { return from_raw((a.v + b.v) % P); }
    friend Fp operator-(Fp a, Fp b) { return from_raw((a.v + P - b.v) % P); }
    friend Fp operator*(Fp a, Fp b) { return from_raw((a.v * b.v) % P); }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp operator-() const { return from_raw(v == 0 ? 0 : P - v); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }
    friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }

    Fp inverse() const {
        ARQ_CHECK(v != 0, "division by zero in F_p");
        /* Fermat: v^(P-2) mod P. P is prime and fits well below 2^32 in practice. */
        std::uint64_t base = v, e = P - 2, acc = 1;
        while (e) {
            if (e & 1) acc = acc * base % P;
            base = base * base % P;
            e >>= 1;
        }
        return from_raw(acc);
    }

    static Fp from_raw(std::uint64_t raw) {
        Fp x;
        x.v = raw;
        return x;
    }
};

/* Uniform access to 0, 1, equality-with-zero and a stable display name per field. */
template <class K>
struct field_traits;

template <>
struct field_traits<Rat> {
    static Rat zero() { return Rat(0); }
    static Rat one() { return Rat(1); }
    static bool is_zero(const Rat& x) { return x == 0; }
    static std::string name() { return "Q"; }
    static constexpr bool is_rational_function = false;
    static constexpr bool finite = false;
};

template <std::uint64_t P>
struct field_traits<Fp<P>> {
    static Fp<P> zero() { return Fp<P>(); }
    static Fp<P> one() { return Fp<P>(1); }
    static bool is_zero(const Fp<P>& x) { return x.v == 0; }
    static std::string name() { return "F" + std::to_string(P); }
    static constexpr bool is_rational_function = false;
    static constexpr bool finite = true;
    static constexpr std::uint64_t order = P;
    static Fp<P> element(std::uint64_t i) { return Fp<P>::from_raw(i % P); }
};

template <class K>
bool is_zero(const K& x) {
    return field_traits<K>::is_zero(x);
}

template <class K>
concept FieldLike = requires(K a, K b) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { a / b } -> std::convertible_to<K>;
    { a == b } -> std::convertible_to<bool>;
    { field_traits<K>::zero() } -> std::convertible_to<K>;
    { field_traits<K>::one() } -> std::convertible_to<K>;
};

} // namespace arq
