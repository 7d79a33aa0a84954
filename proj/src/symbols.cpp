#include "heislab/symbols.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <stdexcept>

#include "heislab/spectral.hpp"

namespace heislab {

namespace {

double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double glue_deriv(double x) { return x > 0.0 ? glue(x) / (x * x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double f = glue(x), g = glue(1.0 - x);
  return f / (f + g);
}

double smooth_step_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double f = glue(x), g = glue(1.0 - x);
  const double fp = glue_deriv(x), gp = glue_deriv(1.0 - x);
  return (fp * g + f * gp) / ((f + g) * (f + g));
}

double eval_cone(const ConeCutoffSpec& spec, double xi1, double xi2, double xi3) {
  const double r = std::sqrt(xi1 * xi1 + xi2 * xi2 + xi3 * xi3);
  switch (spec.kind) {
    case ConeKind::Plus: {
      if (r == 0.0) return 0.0;
      const double ratio = xi3 / r;
      const double angular = smooth_step((ratio - spec.inner_threshold) /
                                         (spec.outer_threshold - spec.inner_threshold));
      const double radial = smooth_step((r - spec.radial_floor) /
                                        (spec.radial_plateau - spec.radial_floor));
      return angular * radial;
    }
    case ConeKind::Minus: {
      ConeCutoffSpec mirrored = spec;
      mirrored.kind = ConeKind::Plus;
      return eval_cone(mirrored, -xi1, -xi2, -xi3);
    }
    case ConeKind::Zero: {
      if (r == 0.0) return 1.0;
      const double ratio = std::abs(xi3) / r;
      return 1.0 - smooth_step((ratio - spec.inner_threshold) /
                               (spec.outer_threshold - spec.inner_threshold));
    }
    case ConeKind::Star: {
      if (r == 0.0) return 0.0;
      const double ratio = std::abs(xi3) / r;
      const double angular = smooth_step((ratio - spec.inner_threshold) /
                                         (spec.outer_threshold - spec.inner_threshold));
      const double radial = smooth_step((r - spec.radial_floor) /
                                        (spec.radial_plateau - spec.radial_floor));
      return angular * radial;
    }
  }
  return 0.0;
}

double eval_symbol(const MultiplierSpec& spec, double xi1, double xi2, double xi3) {
  switch (spec.kind) {
    case SymbolKind::LambdaS:
      return std::pow(1.0 + xi1 * xi1 + xi2 * xi2 + xi3 * xi3, spec.s / 2.0);
    case SymbolKind::PsiS:
      return std::pow(1.0 + xi3 * xi3, spec.s / 2.0) *
             eval_cone(spec.cone, xi1, xi2, xi3);
    case SymbolKind::Cone:
      return eval_cone(spec.cone, xi1, xi2, xi3);
    case SymbolKind::SmootherS: {
      // chi(delta xi) with chi = S(2 - |xi|): one on |xi| <= 1, zero outside
      // |xi| >= 2, chi(0) = 1.
      const double r = spec.delta *
                       std::sqrt(xi1 * xi1 + xi2 * xi2 + xi3 * xi3);
      return smooth_step(2.0 - r);
    }
    case SymbolKind::SmootherK:
      return smooth_step(2.0 - std::abs(spec.delta * xi3)) *
             eval_cone(spec.cone, xi1, xi2, xi3);
  }
  return 0.0;
}

namespace {

std::string cache_key(const GridSpec& g, const MultiplierSpec& spec) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%d,%d,%d|%.17g,%.17g,%.17g|%d|%.17g|%.17g|%d,%.17g,%.17g,%.17g,%.17g",
                g.count[0], g.count[1], g.count[2], g.half_extent[0],
                g.half_extent[1], g.half_extent[2], static_cast<int>(spec.kind),
                spec.s, spec.delta, static_cast<int>(spec.cone.kind),
                spec.cone.inner_threshold, spec.cone.outer_threshold,
                spec.cone.radial_floor, spec.cone.radial_plateau);
  return buf;
}

std::shared_mutex table_mutex;
std::map<std::string, std::shared_ptr<const std::vector<double>>> table_cache;

}  // namespace

std::shared_ptr<const std::vector<double>> make_multiplier(const GridSpec& grid,
                                                           const MultiplierSpec& spec) {
  if ((spec.kind == SymbolKind::LambdaS || spec.kind == SymbolKind::PsiS) &&
      std::abs(spec.s) > 64.0)
    throw std::invalid_argument("make_multiplier: |s| > 64 rejected");
  const std::string key = cache_key(grid, spec);
  {
    std::shared_lock lock(table_mutex);
    auto it = table_cache.find(key);
    if (it != table_cache.end()) return it->second;
  }
  auto table = std::make_shared<std::vector<double>>(grid.size());
  std::size_t m = 0;
  for (int i1 = 0; i1 < grid.count[0]; ++i1) {
    const double xi1 = grid.freq(0, i1);
    for (int i2 = 0; i2 < grid.count[1]; ++i2) {
      const double xi2 = grid.freq(1, i2);
      for (int i3 = 0; i3 < grid.count[2]; ++i3, ++m) {
        const double v = eval_symbol(spec, xi1, xi2, grid.freq(2, i3));
        if (!std::isfinite(v))
          throw std::runtime_error("make_multiplier: non-finite symbol on lattice");
        (*table)[m] = v;
      }
    }
  }
  std::shared_ptr<const std::vector<double>> out = table;
  {
    std::unique_lock lock(table_mutex);
    table_cache.emplace(key, out);
  }
  return out;
}

Field apply_multiplier(const Field& u, const MultiplierSpec& spec) {
  return apply_symbol_table(u, *make_multiplier(u.grid, spec));
}

double partition_floor(const GridSpec& grid) {
  const ConeCutoffSpec plus = ConeCutoffSpec::plus();
  const ConeCutoffSpec zero = ConeCutoffSpec::zero();
  const ConeCutoffSpec minus = ConeCutoffSpec::minus();
  double floor = 3.0;
  for (int i1 = 0; i1 < grid.count[0]; ++i1) {
    const double xi1 = grid.freq(0, i1);
    for (int i2 = 0; i2 < grid.count[1]; ++i2) {
      const double xi2 = grid.freq(1, i2);
      for (int i3 = 0; i3 < grid.count[2]; ++i3) {
        const double xi3 = grid.freq(2, i3);
        if (xi1 * xi1 + xi2 * xi2 + xi3 * xi3 < 1.0) continue;
        const double s = eval_cone(plus, xi1, xi2, xi3) +
                         eval_cone(zero, xi1, xi2, xi3) +
                         eval_cone(minus, xi1, xi2, xi3);
        if (s < floor) floor = s;
      }
    }
  }
  if (!(floor > 0.0))
    throw std::logic_error("partition_floor: cone partition is not positive");
  return floor;
}

void export_symbol_csv(std::ostream& os, const GridSpec& grid,
                       const MultiplierSpec& spec) {
  os << "k1,k2,k3,xi1,xi2,xi3,value\n";
  char buf[160];
  for (int i1 = 0; i1 < grid.count[0]; ++i1)
    for (int i2 = 0; i2 < grid.count[1]; ++i2)
      for (int i3 = 0; i3 < grid.count[2]; ++i3) {
        const double xi1 = grid.freq(0, i1), xi2 = grid.freq(1, i2),
                     xi3 = grid.freq(2, i3);
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.12g,%.12g,%.12g,%.12g\n", i1,
                      i2, i3, xi1, xi2, xi3, eval_symbol(spec, xi1, xi2, xi3));
        os << buf;
      }
}

}  // namespace heislab
