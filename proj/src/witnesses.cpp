#include "heislab/witnesses.hpp"

#include <cmath>
#include <stdexcept>

#include "heislab/symbols.hpp"

namespace heislab {

EvalRule scaled_cutoff(double z_plateau, double z_support, double t_plateau,
                       double t_support) {
  if (!(z_plateau < z_support) || !(t_plateau < t_support))
    throw std::invalid_argument("scaled_cutoff: plateau must precede support");
  return [=](double x1, double x2, double x3) {
    const double r = std::hypot(x1, x2);
    const double eta = 1.0 - smooth_step((r - z_plateau) / (z_support - z_plateau));
    const double tau =
        1.0 - smooth_step((std::abs(x3) - t_plateau) / (t_support - t_plateau));
    return cplx(eta * tau, 0.0);
  };
}

EvalRule t_cutoff(double t_plateau, double t_support) {
  return [=](double, double, double x3) {
    return cplx(1.0 - smooth_step((std::abs(x3) - t_plateau) / (t_support - t_plateau)),
                0.0);
  };
}

EvalRule make_cutoff(const CutoffSpec& spec) {
  if (!(spec.a > 0.0)) throw std::invalid_argument("make_cutoff: a must be positive");
  return scaled_cutoff(CutoffSpec::z_plateau, CutoffSpec::z_support, spec.a,
                       2.0 * spec.a);
}

EvalRule companion_mu(const CutoffSpec& spec) {
  const double a = spec.a;
  return [a](double x1, double x2, double x3) {
    const double r = std::hypot(x1, x2);
    // eta(r) = 1 - S(r - 1): D_z eta = eta'(r) zb / (2r), smooth since eta'
    // vanishes near r = 0.
    const double etap = -smooth_step_deriv(r - CutoffSpec::z_plateau);
    const double radial = (r > 0.0) ? etap / (2.0 * r) : 0.0;
    const double tau = 1.0 - smooth_step((std::abs(x3) - a) / a);
    const double eta = 1.0 - smooth_step(r - CutoffSpec::z_plateau);
    const double taup = -smooth_step_deriv((std::abs(x3) - a) / a) *
                        ((x3 >= 0.0) ? 1.0 : -1.0) / a;
    return cplx(radial * tau, eta * taup);
  };
}

EvalRule make_g_lambda(double lambda, const CutoffSpec& cutoff) {
  if (!(lambda > 0.0)) throw std::invalid_argument("make_g_lambda: lambda > 0");
  const EvalRule rho = make_cutoff(cutoff);
  const double beta = std::pow(lambda, 2.5);
  return [=](double x1, double x2, double x3) {
    const cplx amp = rho(lambda * x1, lambda * x2, x3);
    const double zz = x1 * x1 + x2 * x2;
    return amp * std::exp(-beta * zz) * std::polar(1.0, beta * x3);
  };
}

EvalRule make_h_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("make_h_lambda: lambda > 0");
  const double l2 = lambda * lambda;
  return [l2](double x1, double x2, double x3) {
    return std::exp(-l2 * (x1 * x1 + x2 * x2)) * std::polar(1.0, l2 * x3);
  };
}

EvalRule make_u_delta(double delta, int p) {
  if (!(delta > 0.0)) throw std::invalid_argument("make_u_delta: delta > 0");
  if (p < 0) throw std::invalid_argument("make_u_delta: p >= 0");
  return [=](double x1, double x2, double x3) {
    const cplx w(x1 * x1 + x2 * x2, -x3);
    cplx wp(1.0, 0.0);
    for (int i = 0; i < p; ++i) wp *= w;
    return wp * std::log(w + delta);
  };
}

EvalRule make_witness(const WitnessSpec& spec) {
  switch (spec.family) {
    case WitnessFamily::G:
      return make_g_lambda(spec.lambda, spec.cutoff);
    case WitnessFamily::H:
      return make_h_lambda(spec.lambda);
    case WitnessFamily::UDelta:
      return make_u_delta(spec.delta, spec.p);
    case WitnessFamily::Cutoff:
      return make_cutoff(spec.cutoff);
    case WitnessFamily::Ehrenpreis: {
      auto loc = std::make_shared<EhrenpreisLocalizer>(spec.k > 0 ? spec.k : 4, 1.0);
      return [loc](double, double, double x3) { return cplx((*loc)(x3), 0.0); };
    }
  }
  throw std::logic_error("make_witness: unknown family");
}

// ------------------------------------------------------------------ LogExpr

void LogExpr::add(const Key& k, cplx c) {
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (c != cplx(0.0, 0.0)) terms_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
}

LogExpr LogExpr::u_delta(int p) {
  LogExpr e;
  e.add({0, 0, p, 0, 1}, cplx(1.0, 0.0));
  return e;
}

LogExpr LogExpr::ek_u_delta(int p, int k) {
  LogExpr e;
  const double c = -2.0 * (k + 1);
  if (p > 0) e.add({k, k, p - 1, 0, 1}, cplx(c * p, 0.0));
  e.add({k, k, p, 1, 0}, cplx(c, 0.0));
  return e;
}

LogExpr LogExpr::dz() const {
  LogExpr out;
  for (const auto& [key, c] : terms_) {
    const auto [a, b, m, n, e] = std::array<int, 5>(key);
    if (a > 0) out.add({a - 1, b, m, n, e}, c * double(a));
    // dw/dz = zb
    if (m > 0) out.add({a, b + 1, m - 1, n, e}, c * double(m));
    if (n > 0) out.add({a, b + 1, m, n + 1, e}, c * double(-n));
    if (e > 0) out.add({a, b + 1, m, n + 1, e - 1}, c);
  }
  return out;
}

LogExpr LogExpr::dzb() const {
  LogExpr out;
  for (const auto& [key, c] : terms_) {
    const auto [a, b, m, n, e] = std::array<int, 5>(key);
    if (b > 0) out.add({a, b - 1, m, n, e}, c * double(b));
    // dw/dzb = z
    if (m > 0) out.add({a + 1, b, m - 1, n, e}, c * double(m));
    if (n > 0) out.add({a + 1, b, m, n + 1, e}, c * double(-n));
    if (e > 0) out.add({a + 1, b, m, n + 1, e - 1}, c);
  }
  return out;
}

LogExpr LogExpr::dx(int axis) const {
  LogExpr out;
  if (axis == 0) {
    LogExpr a = dz(), b = dzb();
    for (const auto& [k, c] : a.terms_) out.add(k, c);
    for (const auto& [k, c] : b.terms_) out.add(k, c);
    return out;
  }
  if (axis == 1) {
    LogExpr a = dz(), b = dzb();
    for (const auto& [k, c] : a.terms_) out.add(k, c * cplx(0.0, 1.0));
    for (const auto& [k, c] : b.terms_) out.add(k, c * cplx(0.0, -1.0));
    return out;
  }
  // d/dt: dw/dt = -i
  for (const auto& [key, c] : terms_) {
    const auto [a, b, m, n, e] = std::array<int, 5>(key);
    if (m > 0) out.add({a, b, m - 1, n, e}, c * cplx(0.0, -m));
    if (n > 0) out.add({a, b, m, n + 1, e}, c * cplx(0.0, n));
    if (e > 0) out.add({a, b, m, n + 1, e - 1}, c * cplx(0.0, -1.0));
  }
  return out;
}

LogExpr LogExpr::dmulti(const std::array<int, 3>& beta) const {
  LogExpr e = *this;
  for (int axis = 0; axis < 3; ++axis)
    for (int i = 0; i < beta[axis]; ++i) e = e.dx(axis);
  return e;
}

cplx LogExpr::eval(double delta, double x1, double x2, double x3) const {
  const cplx z(x1, x2);
  const cplx w(x1 * x1 + x2 * x2, -x3);
  const cplx W = w + delta;
  const cplx logW = std::log(W);
  cplx acc(0.0, 0.0);
  for (const auto& [key, c] : terms_) {
    const auto [a, b, m, n, e] = std::array<int, 5>(key);
    cplx v = c;
    for (int i = 0; i < a; ++i) v *= z;
    for (int i = 0; i < b; ++i) v *= std::conj(z);
    for (int i = 0; i < m; ++i) v *= w;
    for (int i = 0; i < n; ++i) v /= W;
    if (e > 0) v *= logW;
    acc += v;
  }
  return acc;
}

// ------------------------------------------------------- EhrenpreisLocalizer

EhrenpreisLocalizer::EhrenpreisLocalizer(int n, double e, double core)
    : n_(n), e_(e), core_(core) {
  if (n < 1 || !(e > 0.0) || !(core > 0.0))
    throw std::invalid_argument("EhrenpreisLocalizer: need n >= 1, e > 0, core > 0");
  const int boxes = 2 * n;
  const double w = e / boxes;
  box_half_ = 128;                   // w / (2h)
  h_ = w / (2.0 * box_half_);
  const double span = core + e + 2.0 * w;
  x0_ = -span;
  const std::size_t m = static_cast<std::size_t>(std::ceil(2.0 * span / h_)) + 1;

  // stages_[j] is the indicator convolved with j boxes; stages_[2N] is psi.
  // Stage 1 is the exact trapezoid profile; later boxes are applied by
  // prefix-sum averaging, which is exact on piecewise-linear data.
  stages_.resize(boxes + 1);
  const double A = core + e / 2.0;  // indicator half-width
  stages_[0].resize(m);
  stages_[1].resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = x0_ + i * h_;
    stages_[0][i] = (std::abs(x) <= A) ? 1.0 : 0.0;
    stages_[1][i] = std::min(1.0, std::max(0.0, (A + w / 2.0 - std::abs(x)) / w));
  }
  std::vector<double> prefix(m);
  for (int s = 2; s <= boxes; ++s) {
    const std::vector<double>& prev = stages_[s - 1];
    prefix[0] = 0.0;
    for (std::size_t i = 1; i < m; ++i)
      prefix[i] = prefix[i - 1] + 0.5 * (prev[i - 1] + prev[i]) * h_;
    stages_[s].assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const long lo = static_cast<long>(i) - box_half_;
      const long hi = static_cast<long>(i) + box_half_;
      const double ilo = (lo < 0) ? 0.0 : prefix[lo];
      const double ihi = (hi >= static_cast<long>(m)) ? prefix[m - 1] : prefix[hi];
      stages_[s][i] = (ihi - ilo) / w;
    }
  }
}

double EhrenpreisLocalizer::operator()(double x) const {
  const std::vector<double>& psi = stages_.back();
  const double pos = (x - x0_) / h_;
  if (pos <= 0.0 || pos >= static_cast<double>(psi.size() - 1)) return 0.0;
  const std::size_t i = static_cast<std::size_t>(pos);
  const double f = pos - i;
  return (1.0 - f) * psi[i] + f * psi[i + 1];
}

double EhrenpreisLocalizer::derivative_sup(int r) const {
  const int boxes = 2 * n_;
  if (r < 0 || r > boxes)
    throw std::invalid_argument("derivative_sup: order exceeds 2N");
  // psi^(r) = Delta_w^r applied to the stage with r fewer box factors; the
  // difference quotients realize the box derivatives exactly.
  const std::vector<double>& st = stages_[boxes - r];
  const double w = e_ / boxes;
  std::vector<double> binom(r + 1, 1.0);
  for (int i = 1; i <= r; ++i) binom[i] = binom[i - 1] * (r - i + 1) / i;
  double sup = 0.0;
  const long m = static_cast<long>(st.size());
  for (long i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= r; ++j) {
      const long shift = static_cast<long>(r - 2 * j) * box_half_;
      const long idx = i + shift;
      if (idx < 0 || idx >= m) continue;
      acc += ((j % 2 == 0) ? 1.0 : -1.0) * binom[j] * st[idx];
    }
    sup = std::max(sup, std::abs(acc) / std::pow(w, r));
  }
  return sup;
}

EhrenpreisLocalizer make_ehrenpreis(int n, double e, double core) {
  return EhrenpreisLocalizer(n, e, core);
}

std::vector<double> dj_sequence(double d, int terms) {
  if (terms < 1 || !(d > 0.0))
    throw std::invalid_argument("dj_sequence: need terms >= 1 and d > 0");
  std::vector<double> w(terms);
  double total = 0.0;
  for (int j = 0; j < terms; ++j) {
    w[j] = 1.0 / ((j + 1.0) * (j + 1.0));
    total += w[j];
  }
  std::vector<double> out(terms);
  double partial = 0.0;
  for (int j = 0; j + 1 < terms; ++j) {
    out[j] = d * (w[j] / total);
    partial += out[j];
  }
  out[terms - 1] = d - partial;  // closes the sum exactly
  return out;
}

}  // namespace heislab
