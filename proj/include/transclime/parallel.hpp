#ifndef TRANSCLIME_PARALLEL_HPP_
#define TRANSCLIME_PARALLEL_HPP_

#include <atomic>
#include <thread>
#include <vector>

namespace transclime {

// Runs fn(i) for i in [0, count). Work items must write to disjoint
// locations; the schedule never affects results. fn must not throw (wrap
// and capture errors at the call site).
template <typename Fn>
void parallel_for(long count, int num_threads, Fn&& fn) {
  if (count <= 0) return;
  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (num_threads <= 0) num_threads = 1;
  }
  if (num_threads == 1 || count == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int nw = static_cast<int>(std::min<long>(num_threads, count));
  pool.reserve(static_cast<std::size_t>(nw));
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace transclime

#endif  // TRANSCLIME_PARALLEL_HPP_
