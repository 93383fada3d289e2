#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gof {

// Replicate drivers. fn(i) must depend only on i (every replicate owns its
// random substream), so the two drivers return identical vectors and the
// parallel one is independent of the thread count and schedule.

template <class Fn>
auto map_replicates_serial(std::size_t count, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

// threads <= 0 uses the OpenMP default.
template <class Fn>
auto map_replicates(std::size_t count, int threads, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(count);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
#else
  (void)threads;
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
#endif
  return out;
}

}  // namespace gof
