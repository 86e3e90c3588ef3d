#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gstft {

// Deterministic OpenMP helpers. Every reduction here produces the same
// bits regardless of thread count: element stores go to disjoint slots,
// sums are accumulated per fixed-size chunk and combined in index order,
// and max is exact under any evaluation order.

template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {
inline constexpr std::size_t kSumChunk = 1024;
}

/// Chunked deterministic sum of f(i) for i in [0, n).
template <class T, class F>
T parallel_sum(std::size_t n, F&& f) {
    const std::size_t nchunks = (n + detail::kSumChunk - 1) / detail::kSumChunk;
    std::vector<T> partial(nchunks, T{});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * detail::kSumChunk;
        const std::size_t hi = std::min(n, lo + detail::kSumChunk);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

template <class T, class F>
T serial_sum(std::size_t n, F&& f) {
    // Same chunked order as parallel_sum so results are bit-identical.
    const std::size_t nchunks = (n + detail::kSumChunk - 1) / detail::kSumChunk;
    T total{};
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = c * detail::kSumChunk;
        const std::size_t hi = std::min(n, lo + detail::kSumChunk);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        total += acc;
    }
    return total;
}

/// Deterministic max of f(i) over [0, n); returns `init` when n == 0.
template <class F>
double parallel_max(std::size_t n, double init, F&& f) {
    double best = init;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        double v = f(static_cast<std::size_t>(i));
        if (v > best) best = v;
    }
    return best;
}

}  // namespace gstft
