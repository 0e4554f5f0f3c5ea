#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace phasespace {

enum class Execution { Serial, Parallel };

/// Sets the OpenMP team size used by Execution::Parallel kernels.
void set_thread_count(int threads);
int thread_count();

/// out[i] = f(i) for i < n. Every index is written exactly once by a pure
/// call, so the result does not depend on scheduling. The first exception
/// thrown by any iteration is rethrown on the calling thread.
template <class T, class F>
std::vector<T> map_indices(Execution exec, std::size_t n, F&& f) {
  std::vector<T> out(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex guard;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace phasespace
