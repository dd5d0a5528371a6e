#ifndef ALSM_PARALLEL_HPP
#define ALSM_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP element-wise and reduction kernels, plus serial reference
// versions. Reductions sum fixed 4096-element blocks and combine the
// block sums in index order, so the parallel result is bit-identical
// to the serial one for any thread count.

namespace alsm {

inline constexpr std::size_t kParallelGrain = 2048;
inline constexpr std::size_t kReduceBlock = 4096;

template <class F>
void for_each_index_serial(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
void for_each_index(std::size_t n, F&& f) {
#ifdef _OPENMP
  if (n >= kParallelGrain) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#endif
  for_each_index_serial(n, f);
}

// Sum of f(i) for i in [0, n) with blocked deterministic combination.
template <class F>
double sum_over_index_serial(std::size_t n, F&& f) {
  double total = 0.0;
  for (std::size_t b = 0; b < n; b += kReduceBlock) {
    const std::size_t hi = b + kReduceBlock < n ? b + kReduceBlock : n;
    double block = 0.0;
    for (std::size_t i = b; i < hi; ++i) block += f(i);
    total += block;
  }
  return total;
}

template <class F>
double sum_over_index(std::size_t n, F&& f) {
#ifdef _OPENMP
  if (n >= kParallelGrain) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> block_sums(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
      const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
      double block = 0.0;
      for (std::size_t i = lo; i < hi; ++i) block += f(i);
      block_sums[static_cast<std::size_t>(b)] = block;
    }
    double total = 0.0;
    for (double s : block_sums) total += s;
    return total;
  }
#endif
  return sum_over_index_serial(n, f);
}

}  // namespace alsm

#endif
