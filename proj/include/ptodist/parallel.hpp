#pragma once

#include <exception>
#include <mutex>

namespace ptodist {

int thread_count();

/// Keeps the first exception thrown inside an OpenMP region so it can be
/// rethrown on the calling thread after the region ends.
class ExceptionCollector {
 public:
  template <typename Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

}  // namespace ptodist
