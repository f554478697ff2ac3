/* ------------------------------------------------------------------------- */
/* Deterministic parallel scaffolding.                                       */
/*                                                                           */
/* Work items are independent and results land at their input index, so the  */
/* assembled output equals the serial evaluation regardless of scheduling.   */
/* When an item throws, the exception from the lowest index is rethrown      */
/* after the region.  Without OpenMP the same entry points run a plain loop, */
/* so callers never branch on the threading configuration.                   */
/*                                                                           */
/* Exact-arithmetic values here are immutable once built and the bulk        */
/* operations (hom/ext dimensions, Smith forms, form evaluations) are pure,  */
/* so they are safe work items.  Contexts that memoize (ARContext) are       */
/* single-threaded by design: give each work item its own, or keep context   */
/* use outside the parallel region.                                          */
/* ------------------------------------------------------------------------- */
#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

#ifdef ARQ_HAVE_OPENMP
#include <omp.h>
#endif

namespace arq {

inline bool parallel_enabled() {
#ifdef ARQ_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

inline int parallel_threads() {
#ifdef ARQ_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

struct FirstError {
    std::exception_ptr err = nullptr;
    std::size_t index = 0;

    void record(std::size_t i) {
        if (!err || i < index) {
            err = std::current_exception();
            index = i;
        }
    }
    void rethrow_if_set() const {
        if (err) std::rethrow_exception(err);
    }
};

}  // namespace detail

/* evaluate fn(0..n-1) and return the results in index order */
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> tmp(n);
    detail::FirstError fe;
#ifdef ARQ_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            tmp[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
        } catch (...) {
#pragma omp critical(arq_parallel_map_error)
            fe.record(static_cast<std::size_t>(i));
        }
    }
#else
    for (std::size_t i = 0; i < n; ++i) {
        try {
            tmp[i].emplace(fn(i));
        } catch (...) {
            fe.record(i);
            break; /* lowest index already found */
        }
    }
#endif
    fe.rethrow_if_set();
    std::vector<R> out;
    out.reserve(n);
    for (auto& t : tmp) out.push_back(std::move(*t));
    return out;
}

/* evaluate fn(0..n-1) for effect on per-index state */
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    detail::FirstError fe;
#ifdef ARQ_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(arq_parallel_for_error)
            fe.record(static_cast<std::size_t>(i));
        }
    }
#else
    for (std::size_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            fe.record(i);
            break;
        }
    }
#endif
    fe.rethrow_if_set();
}

}  // namespace arq
