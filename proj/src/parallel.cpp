#include "ebsr/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ebsr {

std::size_t thread_limit() {
  const char *env = std::getenv("EBSR_THREADS");
  if (env == nullptr) {
    return 1;
  }
  try {
    const long value = std::stol(env);
    return value >= 1 ? static_cast<std::size_t>(value) : 1;
  } catch (const std::exception &) {
    return 1;
  }
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)> &task) {
  const std::size_t workers = std::min(thread_limit(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  // The lowest-index failure is rethrown, as a serial loop would do.
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool) {
    t.join();
  }
  for (const auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

} // namespace ebsr
