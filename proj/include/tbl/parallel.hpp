#pragma once

// Index-map kernels. Every batch of independent runs (truth-table rows,
// calibration probes, parameter sweeps, fan-out points) goes through
// map_indices. The serial path is the reference; the OpenMP path must return
// identical results in identical order.

#include <cstddef>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

namespace tbl {

enum class Execution { Serial, Parallel };

int max_threads();
void set_threads(int n);

template <class R, class Fn>
std::vector<R> map_serial(std::size_t n, Fn&& fn) {
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

template <class R, class Fn>
std::vector<R> map_parallel(std::size_t n, Fn&& fn) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      slots[k].emplace(fn(k));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  // First failure in index order, same as the serial path would raise.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class R, class Fn>
std::vector<R> map_indices(std::size_t n, Fn&& fn, Execution exec) {
  if (exec == Execution::Parallel && n > 1) return map_parallel<R>(n, std::forward<Fn>(fn));
  return map_serial<R>(n, std::forward<Fn>(fn));
}

}  // namespace tbl
