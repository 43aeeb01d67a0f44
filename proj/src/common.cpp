#include "ntunet/common.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ntunet {

unsigned effective_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (count == 0) return;
  const unsigned nt = std::min<std::size_t>(effective_threads(threads), count);
  if (nt <= 1) {
    chunk_fn(0, count);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&](std::size_t begin, std::size_t end) {
    try {
      chunk_fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  const std::size_t base = count / nt;
  const std::size_t rem = count % nt;
  std::vector<std::thread> workers;
  workers.reserve(nt - 1);
  std::size_t begin = 0;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t len = base + (t < rem ? 1 : 0);
    const std::size_t end = begin + len;
    if (t + 1 == nt)
      run(begin, end);  // last chunk on the calling thread
    else
      workers.emplace_back(run, begin, end);
    begin = end;
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ntunet
