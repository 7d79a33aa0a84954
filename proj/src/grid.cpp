#include "heislab/grid.hpp"

#include <stdexcept>
#include <string>

namespace heislab {

GridSpec make_grid(const std::array<double, 3>& half_extents,
                   const std::array<int, 3>& counts) {
  for (int j = 0; j < 3; ++j) {
    if (!(half_extents[j] > 0.0))
      throw std::invalid_argument("make_grid: half extent " + std::to_string(j) +
                                  " must be positive");
    if (counts[j] < 8 || counts[j] % 2 != 0)
      throw std::invalid_argument("make_grid: count " + std::to_string(j) +
                                  " must be even and >= 8");
  }
  return GridSpec{half_extents, counts};
}

}  // namespace heislab
