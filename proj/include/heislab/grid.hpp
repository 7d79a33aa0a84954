#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace heislab {

// Periodic box [-R1,R1) x [-R2,R2) x [-R3,R3) sampled on an even lattice.
// Dual lattice: xi_j in (pi/R_j) * {-N_j/2, ..., N_j/2 - 1}.
struct GridSpec {
  std::array<double, 3> half_extent{};
  std::array<int, 3> count{};

  double spacing(int j) const { return 2.0 * half_extent[j] / count[j]; }
  double freq_step(int j) const { return std::numbers::pi / half_extent[j]; }
  double nyquist(int j) const { return std::numbers::pi / spacing(j); }
  double coord(int j, int i) const { return -half_extent[j] + i * spacing(j); }
  double freq(int j, int i) const {
    const int k = (i < count[j] / 2) ? i : i - count[j];
    return freq_step(j) * k;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(count[0]) * count[1] * count[2];
  }
  std::size_t index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * count[1] + i2) * count[2] + i3;
  }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double box_volume() const {
    return 8.0 * half_extent[0] * half_extent[1] * half_extent[2];
  }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(const std::array<double, 3>& half_extents,
                   const std::array<int, 3>& counts);

// Shifted frame: z -> z - alpha, x3 -> -2 a2 x1 + 2 a1 x2 + x3 - t0.
struct FrameShift {
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double t0 = 0.0;
  FrameShift inverse() const { return {-alpha_re, -alpha_im, -t0}; }
};

}  // namespace heislab
