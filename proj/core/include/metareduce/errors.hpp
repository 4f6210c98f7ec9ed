#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace metareduce {

// Resource guard or time budget exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GuardError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

class TimeoutError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

class Deadline {
 public:
  Deadline() = default;
  static Deadline after(std::chrono::milliseconds budget) {
    Deadline d;
    d.enabled_ = budget.count() > 0;
    d.at_ = std::chrono::steady_clock::now() + budget;
    return d;
  }
  bool expired() const {
    return enabled_ && std::chrono::steady_clock::now() >= at_;
  }
  void check() const {
    if (expired()) throw TimeoutError("time budget exceeded");
  }

 private:
  bool enabled_ = false;
  std::chrono::steady_clock::time_point at_{};
};

// Worker count from METAREDUCE_THREADS, else hardware concurrency.
unsigned thread_count();

}  // namespace metareduce
