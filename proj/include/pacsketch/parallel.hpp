#ifndef PACSKETCH_PARALLEL_HPP
#define PACSKETCH_PARALLEL_HPP

// Index-parallel loop used by every data-parallel kernel. The serial policy
// runs the same body in index order and is the reference the parallel path
// is tested against; bodies must write only to their own index.

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace pacsketch {

enum class ExecPolicy { serial, parallel };

inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

inline int thread_count() { return omp_get_max_threads(); }

template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pacsketch

#endif  // PACSKETCH_PARALLEL_HPP
