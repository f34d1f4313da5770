#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sns {

// Index-sharded parallel loop; rethrows the first worker exception.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int>   next{0};
  std::exception_ptr err;
  std::mutex         err_mu;
  std::vector<std::thread> pool;
  const int nw = std::min(threads, n);
  pool.reserve(nw);
  for (int t = 0; t < nw; ++t)
    pool.emplace_back([&] {
      try {
        for (int i; (i = next.fetch_add(1)) < n;) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        next.store(n);
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sns
