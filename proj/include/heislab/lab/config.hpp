#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "heislab/grid.hpp"

namespace heislab::lab {

struct ExperimentConfig {
  std::string id = "default";
  std::array<int, 3> grid{64, 64, 64};
  std::array<double, 3> box{4.0, 4.0, 4.0};
  int k = 1;
  std::vector<double> lambdas;
  std::vector<double> deltas;
  std::vector<double> eps;
  double s = 0.0;
  double s0 = 4.0;
  int p = 1;
  double cutoff_a = 1.0;
  double eps_reg_factor = 1e-8;
  int corpus_size = 24;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";

  GridSpec grid_spec() const { return make_grid(box, grid); }
  std::string canonical() const;   // stable textual form, keyed into reports
  std::uint64_t hash() const;      // FNV-1a of canonical()
};

// Sweep guard: resolving e^{i f t} needs at least 4 points per period with a
// factor-2 safety margin, i.e. N3 >= ceil(8 f R3 / pi). Throws on violation,
// naming the offending frequency.
void check_t_resolution(const ExperimentConfig& cfg, double t_frequency);

// Snaps lambda so that lambda^2 falls on the dual lattice of the t axis;
// keeps oscillatory witnesses exactly periodic.
double snap_lambda_squared(const ExperimentConfig& cfg, double lambda);

}  // namespace heislab::lab
