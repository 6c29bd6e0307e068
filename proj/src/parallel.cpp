#include "loja/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace loja {

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  workers = std::max(1u, workers);
  // Small jobs are not worth a thread.
  if (workers == 1 || n < 64) {
    body(0, n);
    return;
  }
  std::size_t chunks = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t k = 0; k < chunks; ++k) {
    std::size_t begin = n * k / chunks;
    std::size_t end = n * (k + 1) / chunks;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace loja
