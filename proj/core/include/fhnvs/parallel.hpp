#pragma once

#include <cstdlib>
#include <future>
#include <string>
#include <type_traits>
#include <vector>

namespace fhnvs {

/// Worker count from FHNVS_THREADS (default 1).
inline int thread_count() {
  const char* env = std::getenv("FHNVS_THREADS");
  if (env == nullptr) return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (...) {
    return 1;
  }
}

/// Evaluates fn(0..count-1), possibly concurrently, and returns the results
/// ordered by index.
template <class Fn>
auto ordered_map(int count, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, int>> {
  using R = std::invoke_result_t<Fn&, int>;
  std::vector<R> out;
  out.reserve(static_cast<std::size_t>(count));
  const int workers = thread_count();
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }
  for (int start = 0; start < count; start += workers) {
    std::vector<std::future<R>> batch;
    for (int i = start; i < count && i < start + workers; ++i) {
      batch.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace fhnvs
