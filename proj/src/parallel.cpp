#include "cperc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cperc {

int default_threads() {
  if (const char* env = std::getenv("CPERC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace cperc
