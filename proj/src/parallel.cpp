#include "aqolab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace aqolab {

std::size_t worker_count() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* cap = std::getenv("AQOLAB_THREADS")) {
    try {
      const long v = std::stol(cap);
      if (v > 0) hw = std::min(hw, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      // Ignore garbage and fall back to the hardware count.
    }
  }
  return hw;
}

}  // namespace aqolab
