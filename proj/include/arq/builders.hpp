#pragma once

#include <string>

#include "arq/quiver.hpp"
#include "arq/rep.hpp"

/* Small named quivers used by tests, benchmarks and examples. */

namespace arq {

/* A2: 1 -> 2 */
inline Quiver quiver_a2() {
    Quiver q;
    q.n = 2;
    q.arrows = {{"a", 0, 1}};
    return q;
}

/* linear A_n: 1 -> 2 -> ... -> n */
inline Quiver quiver_an(int n) {
    Quiver q;
    q.n = n;
    for (int i = 0; i + 1 < n; ++i) q.arrows.push_back({"a" + std::to_string(i + 1), i, i + 1});
    return q;
}

/* Kronecker: two parallel arrows 1 -> 2 */
inline Quiver quiver_kronecker() {
    Quiver q;
    q.n = 2;
    q.arrows = {{"a", 0, 1}, {"b", 0, 1}};
    return q;
}

/* wild 3-arrow Kronecker */
inline Quiver quiver_kronecker3() {
    Quiver q;
    q.n = 2;
    q.arrows = {{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}};
    return q;
}

/* extended Dynkin D4~: central vertex 1, leaves 2..5 pointing inward */
inline Quiver quiver_d4_tilde() {
    Quiver q;
    q.n = 5;
    q.arrows = {{"a", 1, 0}, {"b", 2, 0}, {"c", 3, 0}, {"d", 4, 0}};
    return q;
}

/* same underlying graph, all arrows reversed (center outward) */
inline Quiver quiver_d4_tilde_out() {
    Quiver q;
    q.n = 5;
    q.arrows = {{"a", 0, 1}, {"b", 0, 2}, {"c", 0, 3}, {"d", 0, 4}};
    return q;
}

/* extended Dynkin A2~ with orientation 1 -> 2 -> 3 and 1 -> 3 */
inline Quiver quiver_a2_tilde() {
    Quiver q;
    q.n = 3;
    q.arrows = {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 2}};
    return q;
}

/* Kronecker representation with both arrow matrices given explicitly */
template <FieldLike K>
Rep<K> kronecker_rep(const Matrix<K>& a, const Matrix<K>& b) {
    ARQ_REQUIRE(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch");
    Rep<K> r(quiver_kronecker(),
             {static_cast<long long>(a.cols()), static_cast<long long>(a.rows())});
    r.mats = {a, b};
    return r;
}

/* the regular Kronecker module of dimension (1,1) with matrices (1, lambda) */
template <FieldLike K>
Rep<K> kronecker_regular(const K& lambda) {
    Matrix<K> one(1, 1), lam(1, 1);
    one.at(0, 0) = field_traits<K>::one();
    lam.at(0, 0) = lambda;
    return kronecker_rep(one, lam);
}

} // namespace arq
