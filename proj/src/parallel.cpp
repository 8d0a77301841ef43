#include "momentcone/parallel.hpp"

#include <cstdlib>
#include <string>

namespace momentcone {

unsigned thread_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MOMENTCONE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(std::min<long>(v, hw));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return hw;
}

}  // namespace momentcone
