#pragma once

#include <utility>
#include <vector>

namespace heislab::lab {

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};

// Least squares on (log x, log y). Requires positive data and >= 3 points.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pairs);

// Plain linear least squares y = a x + b (for log-linear laws).
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_linear(const std::vector<std::pair<double, double>>& pairs);

}  // namespace heislab::lab
