#include "pairlat/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pairlat {

unsigned default_thread_count() {
  if (const char* env = std::getenv("PAIRLAT_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace pairlat
