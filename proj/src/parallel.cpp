#include "levy/parallel.hpp"

#include <cstdlib>
#include <string>

namespace levy {

int default_workers() {
  if (const char* env = std::getenv("LEVY_WORKERS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace levy
