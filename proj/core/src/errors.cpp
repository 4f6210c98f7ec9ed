#include "metareduce/errors.hpp"

#include <cstdlib>
#include <thread>

namespace metareduce {

unsigned thread_count() {
  if (const char* env = std::getenv("METAREDUCE_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace metareduce
