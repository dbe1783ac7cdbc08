#include "botdetect/parallel.hpp"

#include <cstdlib>
#include <string>

namespace botdetect {

std::size_t default_worker_count() {
  if (const char* env = std::getenv("BOTDETECT_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // Unparseable values fall through to the hardware default.
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace botdetect
