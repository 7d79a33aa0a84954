#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "heislab/field.hpp"

namespace heislab {

// C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly increasing between,
// built from the exponential glue f(x) = e^{-1/x}.
double smooth_step(double x);
double smooth_step_deriv(double x);

enum class ConeKind { Plus, Zero, Minus, Star };

// Smooth conic cutoff in frequency. The ratio variable is xi3/|xi| for the
// plus/minus kinds and |xi3|/|xi| for zero/star. Between inner_threshold and
// outer_threshold the symbol glues smoothly; radial_floor/radial_plateau
// bound the radial ramp, and the symbol is homogeneous of degree zero
// outside the plateau.
struct ConeCutoffSpec {
  ConeKind kind = ConeKind::Plus;
  double inner_threshold = 0.0;
  double outer_threshold = 0.0;
  double radial_floor = 0.0;
  double radial_plateau = 0.0;

  // Vanishes for ratio <= 4/9, equals one for ratio >= 5/9 and |xi| >= 0.95.
  static ConeCutoffSpec plus() { return {ConeKind::Plus, 4.0 / 9.0, 5.0 / 9.0, 0.5, 0.95}; }
  // Equals one for |ratio| <= 2/3, vanishes for |ratio| >= 5/6, at all radii.
  static ConeCutoffSpec zero() { return {ConeKind::Zero, 2.0 / 3.0, 5.0 / 6.0, 0.0, 0.0}; }
  static ConeCutoffSpec minus() { return {ConeKind::Minus, 4.0 / 9.0, 5.0 / 9.0, 0.5, 0.95}; }
  // Vanishes for |ratio| <= 1/6 or |xi| <= 1/3, one for |ratio| >= 1/3 and
  // |xi| >= 1/2.
  static ConeCutoffSpec star() { return {ConeKind::Star, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 0.5}; }

  bool operator==(const ConeCutoffSpec&) const = default;
};

double eval_cone(const ConeCutoffSpec& spec, double xi1, double xi2, double xi3);

enum class SymbolKind { LambdaS, PsiS, Cone, SmootherS, SmootherK };

struct MultiplierSpec {
  SymbolKind kind = SymbolKind::LambdaS;
  double s = 0.0;
  double delta = 0.0;
  ConeCutoffSpec cone{};

  static MultiplierSpec lambda_s(double s) { return {SymbolKind::LambdaS, s, 0.0, {}}; }
  static MultiplierSpec psi_s(double s) {
    return {SymbolKind::PsiS, s, 0.0, ConeCutoffSpec::star()};
  }
  static MultiplierSpec cone_cut(const ConeCutoffSpec& c) {
    return {SymbolKind::Cone, 0.0, 0.0, c};
  }
  static MultiplierSpec smoother_s(double delta) {
    return {SymbolKind::SmootherS, 0.0, delta, {}};
  }
  static MultiplierSpec smoother_k(double delta,
                                   const ConeCutoffSpec& plus = ConeCutoffSpec::plus()) {
    return {SymbolKind::SmootherK, 0.0, delta, plus};
  }

  bool operator==(const MultiplierSpec&) const = default;
};

double eval_symbol(const MultiplierSpec& spec, double xi1, double xi2, double xi3);

// Lattice-sampled symbol table, cached by (grid, spec). Safe for concurrent
// readers; tables are immutable once built.
std::shared_ptr<const std::vector<double>> make_multiplier(const GridSpec& grid,
                                                           const MultiplierSpec& spec);

Field apply_multiplier(const Field& u, const MultiplierSpec& spec);

// Minimum of plus + zero + minus over lattice points with |xi| >= 1.
// Throws if the minimum is not strictly positive.
double partition_floor(const GridSpec& grid);

// CSV rows (k1, k2, k3, xi1, xi2, xi3, value).
void export_symbol_csv(std::ostream& os, const GridSpec& grid,
                       const MultiplierSpec& spec);

}  // namespace heislab
