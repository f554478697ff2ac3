/* ------------------------------------------------------------------------- */
/* Realizing the indecomposable with a prescribed real-root dimension        */
/* vector.                                                                   */
/*                                                                           */
/* When the Tits form of d equals 1 and d supports an indecomposable with    */
/* trivial endomorphism ring, that indecomposable is unique up to            */
/* isomorphism and its orbit is dense in the representation space.  A        */
/* seeded random representation therefore hits it quickly; every candidate   */
/* is verified exactly (dim End = 1, which also forces indecomposability),   */
/* so randomness never affects correctness, only the number of attempts.     */
/* ------------------------------------------------------------------------- */
#pragma once

#include <random>

#include "arq/error.hpp"
#include "arq/format.hpp"
#include "arq/quiver.hpp"
#include "arq/rep.hpp"

namespace arq {

template <FieldLike K>
Rep<K> random_rep(const Quiver& q, const DimVec& d, std::mt19937_64& rng) {
    Rep<K> x;
    x.q = q;
    x.dims = d;
    for (const auto& a : q.arrows) {
        Matrix<K> m(static_cast<std::size_t>(d[a.tgt]), static_cast<std::size_t>(d[a.src]));
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if constexpr (field_traits<K>::finite) {
                    m.at(r, c) = field_traits<K>::element(
                        static_cast<long long>(rng() % static_cast<unsigned long long>(field_traits<K>::order)));
                } else {
                    m.at(r, c) = K(static_cast<long long>(rng() % 19ull) - 9);
                }
            }
        x.mats.push_back(std::move(m));
    }
    x.validate();
    return x;
}

template <FieldLike K>
Rep<K> exceptional_rep(const Quiver& q, const DimVec& d, unsigned long long seed = 0xE8CEED5Full) {
    ARQ_REQUIRE(tits_form(q, d) == 1, "exceptional realization needs a dimension vector of Tits form 1");
    std::mt19937_64 rng(seed);
    const int attempts = 800;
    for (int i = 0; i < attempts; ++i) {
        Rep<K> x = random_rep<K>(q, d, rng);
        if (hom_dim(x, x) == 1) return x;
    }
    ARQ_CHECK(false, "exceptional module search exhausted its attempt budget for dims " + dimvec_str(d));
    return Rep<K>{};
}

}  // namespace arq
