#pragma once

#include <functional>

#include "heislab/field.hpp"

namespace heislab {

// Discrete Fourier transform pair. Forward carries the spatial cell measure
// h1 h2 h3 and the center-origin phase, so that a single lattice mode
// e^{i xi0 . x} transforms to the box volume at the node xi0. The inverse
// carries the dual cell measure; the pair is unitary for inner_product.
Field transform(const Field& u);
Field inverse_transform(const Field& uhat);

// Fourier multiplier with a pointwise symbol m(xi); u must be spatial.
using SymbolFn = std::function<cplx(double, double, double)>;
Field apply_symbol_fn(const Field& u, const SymbolFn& symbol);
// Table variant: values indexed like the frequency-domain field.
Field apply_symbol_table(const Field& u, const std::vector<double>& table);

enum class NormFlavor { Lambda, Psi };
// || Lambda^s u || or || Psi^s u ||.
double sobolev_norm(const Field& u, double s, NormFlavor flavor = NormFlavor::Lambda);

struct SupportReport {
  double boundary_mass_fraction = 0.0;
  double margin_fraction = 0.0;
  double tol = 0.0;
  bool pass = false;
};
// Fraction of L2 mass within margin_fraction of the box boundary.
SupportReport support_check(const Field& u, double margin_fraction, double tol);

// Resample u in the shifted frame so that frame-shifted operators reduce to
// centered ones on the result. Exact on band-limited fields.
Field translate_frame(const Field& u, const FrameShift& shift,
                      bool check_support = true);

Field spectral_derivative(const Field& u, int axis);

}  // namespace heislab
