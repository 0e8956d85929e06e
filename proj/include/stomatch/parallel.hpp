#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stomatch {

/// How Monte Carlo trial loops are executed. Both modes produce identical
/// results: every trial owns an rng stream derived from its index and
/// reductions run in index order afterwards.
enum class Execution { serial, parallel };

inline int available_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls fn(i) for i in [0, count). fn must only write to slot i of any
/// shared output.
template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
  if (exec == Execution::parallel && count > 1) {
    const auto n = static_cast<long long>(count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < n; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    fn(i);
  }
}

}  // namespace stomatch
