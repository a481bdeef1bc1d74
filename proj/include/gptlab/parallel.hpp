#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace gptlab {

/// Execution policy for data-parallel kernels. `serial` is the reference path; both paths
/// return identical results in identical order.
enum class Exec { serial, parallel };

/// Calls fn(i) for i in [0, count). An exception may not leave an OpenMP region, so each
/// index records its own; the lowest-index one is rethrown after the loop, which makes the
/// error seen independent of the policy and of scheduling.
template <class Fn>
void parallel_for(std::size_t count, Exec exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  auto body = [&](std::ptrdiff_t i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      fn(u);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gptlab
