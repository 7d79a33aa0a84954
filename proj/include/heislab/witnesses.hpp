#pragma once

#include <array>
#include <map>
#include <vector>

#include "heislab/field.hpp"

namespace heislab {

// Product cutoff rho(z,t) = eta(|z|) tau(t): eta is 1 on |z| <= z_plateau and
// 0 outside |z| >= z_support, tau is 1 on |t| <= a and 0 outside |t| >= 2a.
// eta is monotone nonincreasing in |z|.
struct CutoffSpec {
  double a = 1.0;
  static constexpr double z_plateau = 1.0;
  static constexpr double z_support = 2.0;
};

EvalRule make_cutoff(const CutoffSpec& spec);
// mu with L rho = zb mu and Lb rho = z conj(mu).
EvalRule companion_mu(const CutoffSpec& spec);

// General smooth product bump, used for nested cutoff pairs.
EvalRule scaled_cutoff(double z_plateau, double z_support, double t_plateau,
                       double t_support);
// The 1-D factor tau alone (for t-localized weights).
EvalRule t_cutoff(double t_plateau, double t_support);

// g(z,t) = rho(lambda z, t) exp(-lambda^{5/2}(|z|^2 - i t)).
EvalRule make_g_lambda(double lambda, const CutoffSpec& cutoff);
// h(z,t) = exp(-lambda^2(|z|^2 - i t)).
EvalRule make_h_lambda(double lambda);
// u(z,t) = (|z|^2 - i t)^p log(|z|^2 + delta - i t), principal branch.
EvalRule make_u_delta(double delta, int p);

enum class WitnessFamily { G, H, UDelta, Cutoff, Ehrenpreis };

struct WitnessSpec {
  WitnessFamily family = WitnessFamily::H;
  double lambda = 1.0;
  double delta = 1.0;
  int p = 0;
  int k = 0;
  CutoffSpec cutoff{};
};

EvalRule make_witness(const WitnessSpec& spec);

// ------------------------------------------------------------------ log family

// Exact symbolic sums c * z^a zb^b w^m (w+delta)^{-n} log^e(w+delta) with
// w = |z|^2 - i t. Closed under d/dx1, d/dx2, d/dt, which is what the
// sup-norm sweeps differentiate.
class LogExpr {
 public:
  using Key = std::array<int, 5>;  // (a, b, m, n, e) with e in {0, 1}

  static LogExpr u_delta(int p);
  // Ek applied to the u family: -2(k+1) |z|^{2k} (p w^{p-1} log W + w^p / W).
  static LogExpr ek_u_delta(int p, int k);

  LogExpr dx(int axis) const;  // axis 0,1,2 -> x1, x2, t
  LogExpr dmulti(const std::array<int, 3>& beta) const;
  cplx eval(double delta, double x1, double x2, double x3) const;

  const std::map<Key, cplx>& terms() const { return terms_; }
  void add(const Key& k, cplx c);

 private:
  LogExpr dz() const;
  LogExpr dzb() const;
  std::map<Key, cplx> terms_;
};

// ------------------------------------------------------------- 1-D localizer

// Cutoff built from an indicator convolved with 2N equal boxes of width
// e/(2N): identically 1 on [-core, core], supported in [-(core+e), core+e],
// with derivative bounds (2N/e)^r for r <= 2N. Derivatives are evaluated
// exactly as iterated difference quotients of the partial convolutions.
class EhrenpreisLocalizer {
 public:
  EhrenpreisLocalizer(int n, double e, double core = 1.0);

  double operator()(double x) const;
  double derivative_sup(int r) const;  // sup |psi^(r)|, r <= 2N
  int order() const { return n_; }
  double separation() const { return e_; }
  double core() const { return core_; }

 private:
  int n_;
  double e_, core_, h_, x0_;
  int box_half_;                              // w/2 in grid steps
  std::vector<std::vector<double>> stages_;   // stage j: indicator * j boxes
};

EhrenpreisLocalizer make_ehrenpreis(int n, double e, double core = 1.0);

// Positive sequence proportional to 1/(j+1)^2 whose sum is exactly d.
std::vector<double> dj_sequence(double d, int terms);

}  // namespace heislab
