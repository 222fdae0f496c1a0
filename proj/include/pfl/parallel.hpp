// pfl: tiny deterministic parallel map.
//
// PFL_THREADS caps the worker count.  Results are written by index, so the
// output is identical to a sequential run whatever the budget.

#pragma once

#include <pfl/rational.hpp>

#include <cstdlib>
#include <thread>
#include <vector>

namespace pfl {

inline int thread_budget() {
  static const int budget = [] {
    const char* env = std::getenv("PFL_THREADS");
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (env == nullptr || *env == '\0') return hw;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1)
      throw input_error("PFL_THREADS must be a positive integer");
    return static_cast<int>(std::min<long>(v, hw));
  }();
  return budget;
}

template <class In, class F>
auto parallel_map(const std::vector<In>& items, F&& f)
    -> std::vector<decltype(f(items[0]))> {
  using Out = decltype(f(items[0]));
  std::vector<Out> out(items.size());
  const int workers = std::min<int>(thread_budget(), static_cast<int>(items.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = f(items[i]);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < items.size();
           i += static_cast<std::size_t>(workers))
        out[i] = f(items[i]);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace pfl
