#pragma once

#include <utility>

#include "heislab/field.hpp"

namespace heislab {

// Grid realizations of the model vector fields:
//   L  = d/dz + i zb d/dt,   Lb = d/dzb - i z d/dt,   T = -i d/dt,
//   X1k = zb^k L,  X2 = Lb,  Ek = -Lb |z|^{2k} L - L Lb.
// Derivatives are spectral; coordinate factors multiply pointwise.
enum class OpKind { L, Lb, T, X1k, X2, Ek };

struct FieldOpSpec {
  OpKind kind = OpKind::L;
  int k = 0;  // used by X1k and Ek
};

struct OpOptions {
  bool strict_support = true;  // guard coordinate multiplications
  double margin = 0.1;
  double tol = 1e-10;
};

Field apply(const FieldOpSpec& op, const Field& u, const OpOptions& opt = {});
Field apply_Ek(const Field& u, int k, const OpOptions& opt = {});

// Relative sesquilinearity defect against the claimed adjoint:
//   L* = -Lb, Lb* = -L, T* = T, X1k* = -Lb z^k, Ek* = Ek.
double adjoint_defect(const FieldOpSpec& op, const Field& u, const Field& v);

struct EnergyBalance {
  double defect = 0.0;       // | ||Lu||^2 - 2 Re(Tu,u) - ||Lbu||^2 | / ||u||_1^2
  double t_imag_rel = 0.0;   // | Im(Tu,u) | / ||u||_1^2
};
EnergyBalance energy_balance(const Field& u);
double energy_defect(const Field& u);

// (Re(Ek u, u), ||zb^k L u||^2 + ||Lb u||^2).
std::pair<double, double> form_value(const Field& u, int k);

Field numeric_commutator(const FieldOpSpec& a, const FieldOpSpec& b,
                         const Field& u, const OpOptions& opt = {});

}  // namespace heislab
