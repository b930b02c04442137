#pragma once

#include <omp.h>

#include <cstddef>
#include <exception>
#include <vector>

namespace sobtrace {

/// out[i] = fn(i) for i < count, evaluated with OpenMP. The first exception thrown by any
/// iteration is rethrown after the loop; results are stored by index, so reductions over
/// `out` in index order are independent of the thread count.
template <class Fn>
auto parallel_map(std::size_t count, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(sobtrace_parallel_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

template <class Fn>
std::vector<double> serial_map(std::size_t count, Fn&& fn) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

}  // namespace sobtrace
