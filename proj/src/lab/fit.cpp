#include "heislab/lab/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace heislab::lab {

LinearFit fit_linear(const std::vector<std::pair<double, double>>& pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 2) throw std::invalid_argument("fit_linear: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: degenerate abscissa");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssres = 0.0;
  for (const auto& [x, y] : pairs) {
    const double r = y - (f.slope * x + f.intercept);
    ssres += r * r;
  }
  f.r2 = (syy > 0.0) ? 1.0 - ssres / syy : 1.0;
  return f;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pairs) {
  const int n = static_cast<int>(pairs.size());
  if (n < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
  std::vector<std::pair<double, double>> logs;
  logs.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("fit_power_law: data must be positive");
    logs.emplace_back(std::log(x), std::log(y));
  }
  LinearFit lf = fit_linear(logs);
  PowerLawFit f;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  f.points = n;
  double ssres = 0.0, sxx = 0.0, mx = 0.0;
  for (const auto& [x, y] : logs) mx += x;
  mx /= n;
  for (const auto& [x, y] : logs) {
    const double r = y - (lf.slope * x + lf.intercept);
    ssres += r * r;
    sxx += (x - mx) * (x - mx);
  }
  f.stderr_slope = (n > 2) ? std::sqrt(ssres / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace heislab::lab
