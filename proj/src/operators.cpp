#include "heislab/operators.hpp"

#include <cmath>

#include "heislab/spectral.hpp"

namespace heislab {

namespace {

void guard_support(const Field& u, const OpOptions& opt, const char* what) {
  if (!opt.strict_support) return;
  SupportReport rep = support_check(u, opt.margin, opt.tol);
  if (!rep.pass)
    throw SupportError(std::string(what) +
                       ": field mass reaches the box boundary; "
                       "coordinate multiplication would see the seam");
}

// One shared forward transform, then the three first-order pieces.
struct FirstOrder {
  Field dz;   // (d/dx1 - i d/dx2)/2
  Field dzb;  // (d/dx1 + i d/dx2)/2
  Field dt;
};

FirstOrder derivatives(const Field& u) {
  Field uhat = transform(u);
  Field zsym = uhat, zbsym = uhat, tsym = uhat;
  std::size_t m = 0;
  const GridSpec& g = u.grid;
  for (int i1 = 0; i1 < g.count[0]; ++i1) {
    const double xi1 = g.freq(0, i1);
    for (int i2 = 0; i2 < g.count[1]; ++i2) {
      const double xi2 = g.freq(1, i2);
      for (int i3 = 0; i3 < g.count[2]; ++i3, ++m) {
        const double xi3 = g.freq(2, i3);
        const cplx v = uhat.data[m];
        zsym.data[m] = v * cplx(xi2 / 2.0, xi1 / 2.0);    // d/dz
        zbsym.data[m] = v * cplx(-xi2 / 2.0, xi1 / 2.0);  // d/dzb
        tsym.data[m] = v * cplx(0.0, xi3);                // d/dt
      }
    }
  }
  return {inverse_transform(zsym), inverse_transform(zbsym), inverse_transform(tsym)};
}

Field apply_L_impl(const Field& u, const OpOptions& opt) {
  guard_support(u, opt, "L");
  FirstOrder d = derivatives(u);
  Field out = std::move(d.dz);
  std::size_t m = 0;
  const GridSpec& g = u.grid;
  for (int i1 = 0; i1 < g.count[0]; ++i1) {
    const double x1 = g.coord(0, i1);
    for (int i2 = 0; i2 < g.count[1]; ++i2) {
      const cplx izb = cplx(0.0, 1.0) * cplx(x1, -g.coord(1, i2));
      for (int i3 = 0; i3 < g.count[2]; ++i3, ++m)
        out.data[m] += izb * d.dt.data[m];
    }
  }
  return out;
}

Field apply_Lb_impl(const Field& u, const OpOptions& opt) {
  guard_support(u, opt, "Lb");
  FirstOrder d = derivatives(u);
  Field out = std::move(d.dzb);
  std::size_t m = 0;
  const GridSpec& g = u.grid;
  for (int i1 = 0; i1 < g.count[0]; ++i1) {
    const double x1 = g.coord(0, i1);
    for (int i2 = 0; i2 < g.count[1]; ++i2) {
      const cplx miz = cplx(0.0, -1.0) * cplx(x1, g.coord(1, i2));
      for (int i3 = 0; i3 < g.count[2]; ++i3, ++m)
        out.data[m] += miz * d.dt.data[m];
    }
  }
  return out;
}

Field apply_T_impl(const Field& u) {
  return apply_symbol_fn(u, [](double, double, double xi3) { return cplx(xi3, 0.0); });
}

Field multiply_z_power(const Field& u, int zpow, int zbpow) {
  Field out = u;
  std::size_t m = 0;
  const GridSpec& g = u.grid;
  for (int i1 = 0; i1 < g.count[0]; ++i1) {
    const double x1 = g.coord(0, i1);
    for (int i2 = 0; i2 < g.count[1]; ++i2) {
      const cplx z(x1, g.coord(1, i2));
      cplx f(1.0, 0.0);
      for (int q = 0; q < zpow; ++q) f *= z;
      for (int q = 0; q < zbpow; ++q) f *= std::conj(z);
      for (int i3 = 0; i3 < g.count[2]; ++i3, ++m) out.data[m] *= f;
    }
  }
  return out;
}

}  // namespace

Field apply_Ek(const Field& u, int k, const OpOptions& opt) {
  if (k < 0) throw std::invalid_argument("apply_Ek: k must be nonnegative");
  guard_support(u, opt, "Ek");
  OpOptions inner = opt;
  inner.strict_support = false;  // the guard ran once on the input
  Field lu = apply_L_impl(u, inner);
  Field w = multiply_z_power(lu, k, k);
  Field first = apply_Lb_impl(w, inner);
  Field lbu = apply_Lb_impl(u, inner);
  Field second = apply_L_impl(lbu, inner);
  Field out = std::move(first);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = -out.data[i] - second.data[i];
  return out;
}

Field apply(const FieldOpSpec& op, const Field& u, const OpOptions& opt) {
  switch (op.kind) {
    case OpKind::L:
      return apply_L_impl(u, opt);
    case OpKind::Lb:
    case OpKind::X2:
      return apply_Lb_impl(u, opt);
    case OpKind::T:
      return apply_T_impl(u);
    case OpKind::X1k: {
      guard_support(u, opt, "X1k");
      OpOptions inner = opt;
      inner.strict_support = false;
      return multiply_z_power(apply_L_impl(u, inner), 0, op.k);
    }
    case OpKind::Ek:
      return apply_Ek(u, op.k, opt);
  }
  throw std::logic_error("apply: unknown operator");
}

namespace {

Field apply_claimed_adjoint(const FieldOpSpec& op, const Field& v) {
  OpOptions lax;
  lax.strict_support = false;
  switch (op.kind) {
    case OpKind::L: {
      Field r = apply_Lb_impl(v, lax);
      r *= cplx(-1.0, 0.0);
      return r;
    }
    case OpKind::Lb:
    case OpKind::X2: {
      Field r = apply_L_impl(v, lax);
      r *= cplx(-1.0, 0.0);
      return r;
    }
    case OpKind::T:
      return apply_T_impl(v);
    case OpKind::X1k: {
      Field r = apply_Lb_impl(multiply_z_power(v, op.k, 0), lax);
      r *= cplx(-1.0, 0.0);
      return r;
    }
    case OpKind::Ek:
      return apply_Ek(v, op.k, lax);
  }
  throw std::logic_error("apply_claimed_adjoint: unknown operator");
}

}  // namespace

double adjoint_defect(const FieldOpSpec& op, const Field& u, const Field& v) {
  OpOptions lax;
  lax.strict_support = false;
  Field au = apply(op, u, lax);
  Field adv = apply_claimed_adjoint(op, v);
  const cplx lhs = inner_product(au, v);
  const cplx rhs = inner_product(u, adv);
  const double nu = l2_norm(u), nv = l2_norm(v);
  const double scale = nu * nv + l2_norm(au) * nv + nu * l2_norm(adv);
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

EnergyBalance energy_balance(const Field& u) {
  FirstOrder d = derivatives(u);
  Field lu = d.dz, lbu = d.dzb, tu = d.dt;
  std::size_t m = 0;
  const GridSpec& g = u.grid;
  for (int i1 = 0; i1 < g.count[0]; ++i1) {
    const double x1 = g.coord(0, i1);
    for (int i2 = 0; i2 < g.count[1]; ++i2) {
      const cplx z(x1, g.coord(1, i2));
      const cplx izb = cplx(0.0, 1.0) * std::conj(z);
      const cplx miz = cplx(0.0, -1.0) * z;
      for (int i3 = 0; i3 < g.count[2]; ++i3, ++m) {
        lu.data[m] += izb * d.dt.data[m];
        lbu.data[m] += miz * d.dt.data[m];
        tu.data[m] *= cplx(0.0, -1.0);  // T = -i d/dt
      }
    }
  }
  const double l2L = inner_product(lu, lu).real();
  const double l2Lb = inner_product(lbu, lbu).real();
  const cplx tpair = inner_product(tu, u);
  const double h1 = sobolev_norm(u, 1.0);
  EnergyBalance b;
  if (h1 == 0.0) return b;
  b.defect = std::abs(l2L - 2.0 * tpair.real() - l2Lb) / (h1 * h1);
  b.t_imag_rel = std::abs(tpair.imag()) / (h1 * h1);
  return b;
}

double energy_defect(const Field& u) { return energy_balance(u).defect; }

std::pair<double, double> form_value(const Field& u, int k) {
  OpOptions lax;
  lax.strict_support = false;
  Field eku = apply_Ek(u, k, lax);
  const double lhs = inner_product(eku, u).real();
  Field x1u = multiply_z_power(apply_L_impl(u, lax), 0, k);
  Field lbu = apply_Lb_impl(u, lax);
  const double rhs = inner_product(x1u, x1u).real() + inner_product(lbu, lbu).real();
  return {lhs, rhs};
}

Field numeric_commutator(const FieldOpSpec& a, const FieldOpSpec& b, const Field& u,
                         const OpOptions& opt) {
  Field ab = apply(a, apply(b, u, opt), opt);
  Field ba = apply(b, apply(a, u, opt), opt);
  ab -= ba;
  return ab;
}

}  // namespace heislab
