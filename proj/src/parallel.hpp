#pragma once

#include <cstdint>
#include <exception>

#include "gmon/execution.hpp"

namespace gmon::detail {

// Runs fn(i) for i in [0, count). Each index writes only its own output slot,
// so results do not depend on the schedule. The first exception thrown by
// any index is rethrown after the loop.
template <class Fn>
void for_each_index(std::int64_t count, Execution exec, Fn&& fn) {
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(gmon_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gmon::detail
