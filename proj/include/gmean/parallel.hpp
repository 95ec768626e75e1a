#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gmean {

/// Execution knobs for grid-filling operations. Filling is split into
/// contiguous flat-index ranges; every output cell is computed by the same
/// code path regardless of the split, so results never depend on `threads`.
struct ExecPolicy {
  unsigned threads = 1;
};

/// Calls body(begin, end) over a partition of [0, count).
template <class Body>
void parallel_for(std::size_t count, const ExecPolicy& policy, Body&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(policy.threads, count / 64 + 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gmean
