#include "heislab/lab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heislab/lab/corpus.hpp"
#include "heislab/ncalg.hpp"
#include "heislab/operators.hpp"
#include "heislab/spectral.hpp"
#include "heislab/symbols.hpp"
#include "heislab/witnesses.hpp"

namespace heislab::lab {

namespace {

double sq(double x) { return x * x; }

const OpOptions kLax{false, 0.1, 1e-10};

// Grid realization of a normal-ordered algebra element with plain rational
// coefficients; the cross-validation bridge between the exact and the
// numeric layers.
Field apply_ncexpr(const ncalg::NCExpr& e, const Field& u) {
  Field out(u.grid, Domain::Spatial);
  for (const auto& [word, coeff] : e.terms()) {
    if (coeff.degree() > 0)
      throw std::invalid_argument("apply_ncexpr: coefficient depends on q");
    Field w = u;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      switch (it->gen) {
        case ncalg::Gen::L:
          w = apply(FieldOpSpec{OpKind::L}, w, kLax);
          break;
        case ncalg::Gen::Lb:
          w = apply(FieldOpSpec{OpKind::Lb}, w, kLax);
          break;
        case ncalg::Gen::T:
          w = apply(FieldOpSpec{OpKind::T}, w, kLax);
          break;
        case ncalg::Gen::Z:
          w = multiply_rule(w, [](double x1, double x2, double) {
            return cplx(x1, x2);
          });
          break;
        case ncalg::Gen::Zb:
          w = multiply_rule(w, [](double x1, double x2, double) {
            return cplx(x1, -x2);
          });
          break;
        case ncalg::Gen::Phi:
          throw std::invalid_argument("apply_ncexpr: phi has no grid realization");
      }
    }
    const double c = coeff.coeff(0).get_d();
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += c * w.data[i];
  }
  return out;
}

double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  double acc = 0.5 * (f(a) + f(b));
  const double h = (b - a) / n;
  for (int i = 1; i < n; ++i) acc += f(a + i * h);
  return acc * h;
}

double tau_l2sq(double a) {
  EvalRule tau = t_cutoff(a, 2.0 * a);
  return trapezoid([&](double t) { return std::norm(tau(0, 0, t)); }, -2.0 * a,
                   2.0 * a, 20000);
}

}  // namespace

ScalingKind scaling_kind(const std::string& name) {
  if (name == "prop1") return ScalingKind::Prop1;
  if (name == "prop3") return ScalingKind::Prop3;
  if (name == "slab") return ScalingKind::Slab;
  if (name == "prop2") return ScalingKind::Prop2;
  if (name == "product") return ScalingKind::AppendixProduct;
  throw std::invalid_argument("unknown scaling sweep: " + name);
}

EstimateKind estimate_kind(const std::string& name) {
  if (name == "thmA") return EstimateKind::ThmA;
  if (name == "gain0") return EstimateKind::GainZero;
  if (name == "gainminus") return EstimateKind::GainMinus;
  if (name == "gainplus0") return EstimateKind::GainPlusK0;
  if (name == "lemma7") return EstimateKind::Lemma7;
  if (name == "apriori10") return EstimateKind::Apriori10;
  if (name == "appendix11") return EstimateKind::Appendix11;
  throw std::invalid_argument("unknown estimate: " + name);
}

std::string to_string(ScalingKind k) {
  switch (k) {
    case ScalingKind::Prop1: return "prop1";
    case ScalingKind::Prop3: return "prop3";
    case ScalingKind::Slab: return "slab";
    case ScalingKind::Prop2: return "prop2";
    case ScalingKind::AppendixProduct: return "product";
  }
  return "?";
}

std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::ThmA: return "thmA";
    case EstimateKind::GainZero: return "gain0";
    case EstimateKind::GainMinus: return "gainminus";
    case EstimateKind::GainPlusK0: return "gainplus0";
    case EstimateKind::Lemma7: return "lemma7";
    case EstimateKind::Apriori10: return "apriori10";
    case EstimateKind::Appendix11: return "appendix11";
  }
  return "?";
}

// ------------------------------------------------------------- identities

IdentityReport run_identity_suite(const ExperimentConfig& cfg) {
  IdentityReport rep;
  rep.cfg = cfg;
  const GridSpec grid = cfg.grid_spec();
  const auto corpus = identity_corpus(grid, cfg.corpus_size, cfg.seed);
  const int n = static_cast<int>(corpus.size());

  double energy_max = 0.0, timag_max = 0.0;
  for (const auto& u : corpus) {
    EnergyBalance b = energy_balance(u);
    energy_max = std::max(energy_max, b.defect);
    timag_max = std::max(timag_max, b.t_imag_rel);
  }
  rep.rows.push_back({"energy_defect_max", energy_max, 1e-9, energy_max <= 1e-9});
  rep.rows.push_back({"t_pairing_imag_max", timag_max, 1e-12, timag_max <= 1e-12});

  const std::vector<std::pair<std::string, FieldOpSpec>> kinds = {
      {"L", {OpKind::L, 0}},
      {"Lb", {OpKind::Lb, 0}},
      {"T", {OpKind::T, 0}},
      {"X1k", {OpKind::X1k, cfg.k}},
      {"Ek", {OpKind::Ek, cfg.k}},
  };
  for (const auto& [name, spec] : kinds) {
    double worst = 0.0;
    for (int i = 0; i + 1 < n; i += 2)
      worst = std::max(worst, adjoint_defect(spec, corpus[i], corpus[i + 1]));
    rep.rows.push_back({"adjoint_" + name + "_max", worst, 1e-9, worst <= 1e-9});
  }

  {
    double worst = 0.0;
    for (const auto& u : corpus) {
      Field comm = numeric_commutator({OpKind::L, 0}, {OpKind::Lb, 0}, u, kLax);
      Field twot = apply(FieldOpSpec{OpKind::T}, u, kLax);
      twot *= cplx(2.0, 0.0);
      comm -= twot;
      const double denom = l2_norm(twot);
      if (denom > 0.0) worst = std::max(worst, l2_norm(comm) / denom);
    }
    rep.rows.push_back({"comm_LLb_vs_2T_max", worst, 1e-10, worst <= 1e-10});
  }

  {
    // Commutators of every generator pair against their exact expansions.
    using ncalg::NCExpr;
    const std::vector<std::pair<FieldOpSpec, NCExpr>> gens = {
        {{OpKind::L, 0}, NCExpr::l()},       {{OpKind::Lb, 0}, NCExpr::lb()},
        {{OpKind::T, 0}, NCExpr::t()},       {{OpKind::X1k, 1}, ncalg::x1k(1)},
        {{OpKind::X1k, 2}, ncalg::x1k(2)},
    };
    double worst = 0.0;
    const int fields = std::min(3, n);
    for (int f = 0; f < fields; ++f) {
      const Field& u = corpus[f];
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
          Field ab = apply(gens[i].first, apply(gens[j].first, u, kLax), kLax);
          Field ba = apply(gens[j].first, apply(gens[i].first, u, kLax), kLax);
          NCExpr cexpr = ncalg::commutator(gens[i].second, gens[j].second);
          Field alg = apply_ncexpr(cexpr, u);
          Field diff = ab;
          diff -= ba;
          diff -= alg;
          const double denom = l2_norm(ab) + l2_norm(ba) + l2_norm(u);
          worst = std::max(worst, l2_norm(diff) / denom);
        }
    }
    rep.rows.push_back({"comm_vs_algebra_max", worst, 1e-8, worst <= 1e-8});
  }

  {
    double worst = 0.0, nonneg_min = 0.0;
    for (const auto& u : corpus) {
      auto [lhs, rhs] = form_value(u, cfg.k);
      const double h1 = sq(sobolev_norm(u, 1.0));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-30));
      nonneg_min = std::min(nonneg_min, lhs / h1);
    }
    rep.rows.push_back({"form_equality_max", worst, 1e-9, worst <= 1e-9});
    rep.rows.push_back(
        {"form_nonneg_min", nonneg_min, -1e-12, nonneg_min >= -1e-12});
  }

  {
    const double floor = partition_floor(grid);
    rep.rows.push_back({"partition_floor", floor, 0.0, floor > 0.0});
  }

  {
    // Eigenrelation of the oscillatory family under Ek. The frequency is
    // snapped onto the dual lattice so the raw sample is exactly periodic;
    // the z-profile decays to roundoff inside the box.
    const double lambda = snap_lambda_squared(cfg, 2.0);
    const double l2v = lambda * lambda;
    Field h = sample(grid, make_h_lambda(lambda));
    Field num = apply_Ek(h, cfg.k, kLax);
    double emax = 0.0, ref = 0.0;
    std::size_t m = 0;
    for (int i1 = 0; i1 < grid.count[0]; ++i1) {
      const double x1 = grid.coord(0, i1);
      for (int i2 = 0; i2 < grid.count[1]; ++i2) {
        const double x2 = grid.coord(1, i2);
        const double zz = x1 * x1 + x2 * x2;
        for (int i3 = 0; i3 < grid.count[2]; ++i3, ++m) {
          if (zz > 0.81 || std::abs(grid.coord(2, i3)) > 0.9) continue;
          const cplx expect =
              2.0 * (cfg.k + 1) * l2v * std::pow(zz, cfg.k) * h.data[m];
          emax = std::max(emax, std::abs(num.data[m] - expect));
          ref = std::max(ref, std::abs(expect));
        }
      }
    }
    const double rel = emax / std::max(ref, 1e-30);
    rep.rows.push_back({"ekh_plateau_residual", rel, 1e-6, rel <= 1e-6});

    const EvalRule rho = make_cutoff(CutoffSpec{1.0});
    const EvalRule hr = make_h_lambda(lambda);
    Field rh = sample(grid, [&](double x1, double x2, double x3) {
      return rho(x1, x2, x3) * hr(x1, x2, x3);
    });
    const double ed = energy_defect(rh);
    rep.rows.push_back({"energy_defect_osc", ed, 1e-8, ed <= 1e-8});
  }

  return rep;
}

// ---------------------------------------------------------------- scaling

namespace {

ScalingSeries make_series(const std::string& name, std::vector<double> x,
                          std::vector<double> y, std::vector<double> oracle = {}) {
  ScalingSeries s;
  s.name = name;
  s.x = std::move(x);
  s.measured = std::move(y);
  s.oracle = std::move(oracle);
  return s;
}

void fit_series(ScalingSeries& s) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < s.x.size(); ++i) pts.emplace_back(s.x[i], s.measured[i]);
  s.fit = fit_power_law(pts);
}

void judge_slope(ScalingSeries& s) {
  s.pass = true;
  if (s.oracle_slope && s.slope_tol)
    s.pass = std::abs(s.fit.slope - *s.oracle_slope) <= *s.slope_tol;
  if (s.slope_floor) s.pass = s.pass && s.fit.slope >= *s.slope_floor;
  if (s.slope_cap) s.pass = s.pass && s.fit.slope <= *s.slope_cap;
}

ScalingReport run_prop1(const ExperimentConfig& cfg) {
  ScalingReport rep;
  rep.which = "prop1";
  rep.sweep_name = "lambda";
  rep.cfg = cfg;
  const GridSpec grid = cfg.grid_spec();
  const CutoffSpec cut{cfg.cutoff_a};
  std::vector<double> lambdas = cfg.lambdas;
  std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.25, 0.5} : cfg.eps;

  std::vector<double> g2, g2_oracle;
  std::vector<std::vector<double>> ratios(eps.size()), lemma1(eps.size());
  const double tausq = tau_l2sq(cfg.cutoff_a);
  for (double lambda : lambdas) {
    check_t_resolution(cfg, std::pow(lambda, 2.5));
    Field g = sample(grid, make_g_lambda(lambda, cut));
    SupportReport sup = support_check(g, 0.1, 1e-10);
    if (!sup.pass) throw SupportError("prop1: witness leaves the margin");
    Field x1g = apply(FieldOpSpec{OpKind::X1k, cfg.k}, g);
    Field lbg = apply(FieldOpSpec{OpKind::Lb, 0}, g);
    const double denom = sq(l2_norm(x1g)) + sq(l2_norm(lbg));
    const double gn = l2_norm(g);
    g2.push_back(sq(gn));
    g2_oracle.push_back(std::numbers::pi / (2.0 * std::pow(lambda, 2.5)) * tausq);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      const double ge = sobolev_norm(g, eps[e]);
      ratios[e].push_back(sq(ge) / denom);
      lemma1[e].push_back(ge / gn);
    }
  }

  {
    ScalingSeries s = make_series("norm_g_sq", lambdas, g2, g2_oracle);
    fit_series(s);
    s.oracle_slope = -2.5;
    s.pass = true;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      if (lambdas[i] >= 4.0)
        s.pass = s.pass && std::abs(g2[i] / g2_oracle[i] - 1.0) <= 0.05;
    rep.series.push_back(std::move(s));
  }
  for (std::size_t e = 0; e < eps.size(); ++e) {
    char name[64];
    std::snprintf(name, sizeof(name), "ratio_eps%g", eps[e]);
    ScalingSeries s = make_series(name, lambdas, ratios[e]);
    fit_series(s);
    if (cfg.k >= 1) {
      s.slope_floor = 2.0 * eps[e] - 0.2;
    } else if (eps[e] == 0.5) {
      s.slope_cap = 0.2;
    }
    judge_slope(s);
    rep.series.push_back(std::move(s));

    std::snprintf(name, sizeof(name), "lemma1_eps%g", eps[e]);
    ScalingSeries s2 = make_series(name, lambdas, lemma1[e]);
    fit_series(s2);
    s2.slope_floor = eps[e] - 0.1;
    judge_slope(s2);
    rep.series.push_back(std::move(s2));
  }
  return rep;
}

ScalingReport run_prop3(const ExperimentConfig& cfg) {
  ScalingReport rep;
  rep.which = "prop3";
  rep.sweep_name = "lambda";
  rep.cfg = cfg;
  const GridSpec grid = cfg.grid_spec();
  const double a = cfg.cutoff_a;
  const EvalRule rho = make_cutoff(CutoffSpec{a});
  const EvalRule tau = t_cutoff(a, 2.0 * a);
  const ConeCutoffSpec plus = ConeCutoffSpec::plus();
  const int k = cfg.k;
  const double s = cfg.s;

  std::vector<double> lambdas;
  for (double l : cfg.lambdas) lambdas.push_back(snap_lambda_squared(cfg, l));

  std::vector<double> y_rho, y_psi, y_neg;
  for (double lambda : lambdas) {
    const double l2v = lambda * lambda;
    check_t_resolution(cfg, l2v);
    const EvalRule h = make_h_lambda(lambda);
    Field hf = sample(grid, h);
    // || rho Gamma+ h ||
    Field gp = apply_multiplier(hf, MultiplierSpec::cone_cut(plus));
    y_rho.push_back(l2_norm(multiply_rule(gp, rho)));
    // || Psi^s Gamma+ (tau Ek h) ||^2 with the exact eigenrelation for Ek h
    Field tekh = sample(grid, [&](double x1, double x2, double x3) {
      const double zz = x1 * x1 + x2 * x2;
      const double amp = 2.0 * (k + 1) * l2v * std::pow(zz, k);
      return tau(0, 0, x3) * amp * h(x1, x2, x3);
    });
    Field w = apply_symbol_fn(tekh, [&](double xi1, double xi2, double xi3) {
      return cplx(std::pow(1.0 + xi3 * xi3, s / 2.0) *
                      eval_cone(plus, xi1, xi2, xi3),
                  0.0);
    });
    y_psi.push_back(sq(l2_norm(w)));
    // || tau h ||_{-s0}
    Field th = sample(grid, [&](double x1, double x2, double x3) {
      return tau(0, 0, x3) * h(x1, x2, x3);
    });
    y_neg.push_back(sobolev_norm(th, -cfg.s0));
  }

  {
    ScalingSeries se = make_series("rho_gamma_plus_h", lambdas, y_rho);
    fit_series(se);
    se.oracle_slope = -3.0;
    se.slope_tol = 0.3;
    judge_slope(se);
    rep.series.push_back(std::move(se));
  }
  {
    ScalingSeries se = make_series("psi_gamma_plus_tau_ekh_sq", lambdas, y_psi);
    fit_series(se);
    se.oracle_slope = 4.0 * s - 4.0 * k - 2.0;
    se.slope_tol = 0.5;
    judge_slope(se);
    rep.series.push_back(std::move(se));
  }
  {
    ScalingSeries se = make_series("tau_h_neg_norm", lambdas, y_neg);
    fit_series(se);
    se.slope_cap = -cfg.s0 + 0.5;
    judge_slope(se);
    rep.series.push_back(std::move(se));
  }
  char note[160];
  std::snprintf(note, sizeof(note),
                "recomputed oracle slopes: rho_gamma_plus_h=-1, "
                "psi_gamma_plus_tau_ekh_sq=%g, tau_h_neg_norm=%g",
                4.0 * s - 4.0 * k + 2.0, -2.0 * cfg.s0 - 1.0);
  rep.notes.push_back(note);
  return rep;
}

ScalingReport run_slab(const ExperimentConfig& cfg) {
  ScalingReport rep;
  rep.which = "slab";
  rep.sweep_name = "delta";
  rep.cfg = cfg;
  const GridSpec grid = cfg.grid_spec();
  std::vector<double> eps = cfg.eps.empty() ? std::vector<double>{0.25, 0.5} : cfg.eps;
  const std::vector<double>& deltas = cfg.deltas;

  std::vector<std::vector<double>> ratio(eps.size());
  for (double delta : deltas) {
    // Narrow in x1 at scale delta, wide across: the sweep then probes the
    // slab direction alone.
    const double w1 = delta / 4.0;
    Field u = sample(grid, [&](double x1, double x2, double x3) {
      return cplx(std::exp(-x1 * x1 / (2.0 * w1 * w1)) *
                      std::exp(-(x2 * x2 + x3 * x3) / 0.72),
                  0.0);
    });
    const double n0 = l2_norm(u);
    for (std::size_t e = 0; e < eps.size(); ++e)
      ratio[e].push_back(n0 / sobolev_norm(u, eps[e]));
  }
  for (std::size_t e = 0; e < eps.size(); ++e) {
    char name[64];
    std::snprintf(name, sizeof(name), "slab_ratio_eps%g", eps[e]);
    ScalingSeries s = make_series(name, deltas, ratio[e]);
    fit_series(s);
    s.slope_floor = eps[e] - 0.1;
    judge_slope(s);
    rep.series.push_back(std::move(s));
  }

  // Exact 1-D rescaling law ||u_delta||^2 = ||u||^2 / delta.
  {
    const auto bump = [](double y) { return smooth_step(2.0 * (1.0 - std::abs(y))); };
    const int m = 40000;
    const double base = trapezoid([&](double y) { return sq(bump(y)); }, -1.0, 1.0, m);
    std::vector<double> dev;
    for (double delta : deltas) {
      const double udsq = trapezoid(
          [&](double y) { return sq(bump(y / delta)); }, -delta, delta, m);
      dev.push_back(std::abs(base * delta / udsq - 1.0));
    }
    ScalingSeries s = make_series("rescale_law_dev", deltas, dev);
    s.pass = true;
    for (double d : dev) s.pass = s.pass && d <= 1e-10;
    rep.series.push_back(std::move(s));
  }
  return rep;
}

ScalingReport run_prop2(const ExperimentConfig& cfg) {
  ScalingReport rep;
  rep.which = "prop2";
  rep.sweep_name = "delta";
  rep.cfg = cfg;
  const int p = cfg.p, k = cfg.k;
  const std::vector<double>& deltas = cfg.deltas;

  // Center t-derivative measured by a contour integral of the sampled rule
  // inside its analyticity disc |t| < delta.
  std::vector<double> x_log, y_center, oracle_center;
  double pfact = 1.0;
  for (int i = 2; i <= p; ++i) pfact *= i;
  for (double delta : deltas) {
    const double radius = delta / 2.0;
    const int msteps = 256;
    cplx acc(0.0, 0.0);
    for (int j = 0; j < msteps; ++j) {
      const double th = 2.0 * std::numbers::pi * j / msteps;
      const cplx t = std::polar(radius, th);
      cplx wt(1.0, 0.0);
      const cplx mit = cplx(0.0, -1.0) * t;
      for (int q = 0; q < p; ++q) wt *= mit;
      const cplx f = wt * std::log(delta + mit);
      acc += f * std::polar(1.0, -p * th);
    }
    acc /= static_cast<double>(msteps);
    const double dp = pfact * std::abs(acc) / std::pow(radius, p);
    x_log.push_back(std::log(1.0 / delta));
    y_center.push_back(dp);
    oracle_center.push_back(pfact * std::log(1.0 / delta));
  }
  {
    ScalingSeries s = make_series("center_dtp", x_log, y_center, oracle_center);
    // Linear in log(1/delta); slope is the factorial coefficient.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x_log.size(); ++i)
      pts.emplace_back(x_log[i], y_center[i]);
    LinearFit lf = fit_linear(pts);
    s.fit.slope = lf.slope;
    s.fit.intercept = lf.intercept;
    s.fit.r2 = lf.r2;
    s.fit.points = static_cast<int>(pts.size());
    s.oracle_slope = pfact;
    s.pass = (lf.r2 >= 0.99) && (std::abs(lf.slope - pfact) <= 0.05 * pfact);
    rep.series.push_back(std::move(s));
    rep.notes.push_back("center_dtp fit is linear in log(1/delta)");
  }

  // Sup of |D^beta Ek u| over nested boxes for |beta| <= p + k - 1.
  {
    std::vector<std::array<int, 3>> betas;
    const int bmax = p + k - 1;
    for (int b1 = 0; b1 <= bmax; ++b1)
      for (int b2 = 0; b2 + b1 <= bmax; ++b2)
        for (int b3 = 0; b3 + b2 + b1 <= bmax; ++b3)
          betas.push_back({b1, b2, b3});
    std::vector<LogExpr> dexprs;
    const LogExpr base = LogExpr::ek_u_delta(p, k);
    for (const auto& beta : betas) dexprs.push_back(base.dmulti(beta));

    std::vector<double> sups;
    for (double delta : deltas) {
      double sup = 0.0;
      for (double scale : {1.0, 0.3, 0.05}) {
        const int nn = 10;
        for (int i1 = -nn; i1 <= nn; ++i1)
          for (int i2 = -nn; i2 <= nn; ++i2)
            for (int i3 = -nn; i3 <= nn; ++i3) {
              const double x1 = scale * i1 / nn, x2 = scale * i2 / nn,
                           x3 = scale * i3 / nn;
              for (const auto& de : dexprs)
                sup = std::max(sup, std::abs(de.eval(delta, x1, x2, x3)));
            }
      }
      sups.push_back(sup);
    }
    ScalingSeries s = make_series("forcing_sup_max", deltas, sups);
    const double lo = *std::min_element(sups.begin(), sups.end());
    const double hi = *std::max_element(sups.begin(), sups.end());
    s.pass = (lo > 0.0) && (hi / lo <= 10.0);
    rep.series.push_back(std::move(s));
    char note[96];
    std::snprintf(note, sizeof(note), "forcing_sup max/min = %.6g", hi / lo);
    rep.notes.push_back(note);
  }
  return rep;
}

ScalingReport run_product(const ExperimentConfig& cfg) {
  ScalingReport rep;
  rep.which = "product";
  rep.sweep_name = "p";
  rep.cfg = cfg;
  std::vector<double> ps, ys;
  for (int p = 8; p <= 1024; p *= 2) {
    const int jmax = static_cast<int>(
        std::ceil(std::log(static_cast<double>(p)) / std::log(4.0 / 3.0)));
    double sum = 0.0;
    for (int j = 1; j <= jmax; ++j)
      sum += std::pow(0.75, j) * std::log(static_cast<double>(j));
    ps.push_back(p);
    ys.push_back(2.0 * p * sum);
  }
  double tail = 0.0;
  for (int j = 1; j <= 400; ++j)
    tail += std::pow(0.75, j) * std::log(static_cast<double>(j));

  ScalingSeries s = make_series("log_product", ps, ys);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ps.size(); ++i) pts.emplace_back(ps[i], ys[i]);
  LinearFit lf = fit_linear(pts);
  s.fit.slope = lf.slope;
  s.fit.intercept = lf.intercept;
  s.fit.r2 = lf.r2;
  s.fit.points = static_cast<int>(pts.size());
  s.oracle_slope = 2.0 * tail;
  s.pass = lf.r2 >= 0.999;
  rep.series.push_back(std::move(s));
  rep.notes.push_back("log_product fit is linear in p; slope approaches 2*sum");
  return rep;
}

}  // namespace

ScalingReport run_scaling(const ExperimentConfig& cfg_in, ScalingKind which) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.lambdas.empty()) cfg.lambdas = default_lambdas(which);
  if (cfg.deltas.empty()) cfg.deltas = default_deltas(which);
  switch (which) {
    case ScalingKind::Prop1: return run_prop1(cfg);
    case ScalingKind::Prop3: return run_prop3(cfg);
    case ScalingKind::Slab: return run_slab(cfg);
    case ScalingKind::Prop2: return run_prop2(cfg);
    case ScalingKind::AppendixProduct: return run_product(cfg);
  }
  throw std::logic_error("run_scaling: unknown kind");
}

// -------------------------------------------------------------- estimates

namespace {

struct EstCtx {
  ExperimentConfig cfg;
  GridSpec grid;
  EvalRule rho, rho_prime;
};

EstCtx make_ctx(const ExperimentConfig& cfg, const GridSpec& grid) {
  EstCtx ctx{cfg, grid, make_cutoff(CutoffSpec{cfg.cutoff_a}),
             scaled_cutoff(2.2, 3.4, 2.2, 3.4)};
  return ctx;
}

// Nested cones: the tilde variant is identically 1 on a neighborhood of the
// support of the base cone.
ConeCutoffSpec zero_tilde() { return {ConeKind::Zero, 7.0 / 8.0, 17.0 / 18.0, 0.0, 0.0}; }
ConeCutoffSpec minus_tilde() { return {ConeKind::Minus, 0.25, 0.424, 0.3, 0.45}; }
ConeCutoffSpec plus_tilde() { return {ConeKind::Plus, 0.25, 0.424, 0.3, 0.45}; }

// Returns (lhs, rhs) of the tested estimate for one sample. rhs_shift
// lowers the leading right-hand Sobolev index (stressor diagnostics).
std::pair<double, double> estimate_sides(EstimateKind which, const EstCtx& ctx,
                                         const Field& u, double rhs_shift = 0.0) {
  const int k = ctx.cfg.k;
  const double s = ctx.cfg.s, s0 = ctx.cfg.s0;
  switch (which) {
    case EstimateKind::ThmA: {
      Field lu = apply(FieldOpSpec{OpKind::L, 0}, u, kLax);
      Field lbu = apply(FieldOpSpec{OpKind::Lb, 0}, u, kLax);
      const double lhs = sq(sobolev_norm(u, 0.5));
      const double rhs = sq(l2_norm(lu)) + sq(l2_norm(lbu)) + sq(l2_norm(u));
      return {lhs, rhs};
    }
    case EstimateKind::Lemma7: {
      Field x1u = apply(FieldOpSpec{OpKind::X1k, 1}, u, kLax);
      Field lbu = apply(FieldOpSpec{OpKind::Lb, 0}, u, kLax);
      return {sq(l2_norm(u)), sq(l2_norm(x1u)) + sq(l2_norm(lbu))};
    }
    case EstimateKind::GainZero: {
      Field g0u = apply_multiplier(u, MultiplierSpec::cone_cut(ConeCutoffSpec::zero()));
      const double lhs = sq(sobolev_norm(multiply_rule(g0u, ctx.rho), s + 2.0));
      Field ek = apply_Ek(u, k, kLax);
      Field g0e = apply_multiplier(ek, MultiplierSpec::cone_cut(zero_tilde()));
      const double rhs = sq(sobolev_norm(multiply_rule(g0e, ctx.rho_prime), s)) +
                         sq(sobolev_norm(u, -s0));
      return {lhs, rhs};
    }
    case EstimateKind::GainMinus: {
      Field gmu = apply_multiplier(u, MultiplierSpec::cone_cut(ConeCutoffSpec::minus()));
      const double lhs = sq(sobolev_norm(multiply_rule(gmu, ctx.rho), s + 1.0));
      Field ek = apply_Ek(u, k, kLax);
      Field gme = apply_multiplier(ek, MultiplierSpec::cone_cut(minus_tilde()));
      const double rhs = sq(sobolev_norm(multiply_rule(gme, ctx.rho_prime), s)) +
                         sq(sobolev_norm(u, -s0));
      return {lhs, rhs};
    }
    case EstimateKind::GainPlusK0: {
      Field gpu = apply_multiplier(u, MultiplierSpec::cone_cut(ConeCutoffSpec::plus()));
      const double lhs = sq(sobolev_norm(multiply_rule(gpu, ctx.rho), s + 1.0));
      Field e0 = apply_Ek(u, 0, kLax);
      Field gpe = apply_multiplier(e0, MultiplierSpec::cone_cut(plus_tilde()));
      const double rhs = sq(sobolev_norm(multiply_rule(gpe, ctx.rho_prime), s)) +
                         sq(sobolev_norm(u, -s0));
      return {lhs, rhs};
    }
    case EstimateKind::Apriori10: {
      const double sigma = 1.0 / (2.0 * k);
      Field gpu = apply_multiplier(u, MultiplierSpec::cone_cut(ConeCutoffSpec::plus()));
      const double lhs =
          sq(sobolev_norm(multiply_rule(gpu, ctx.rho), s + sigma, NormFlavor::Psi));
      Field ek = apply_Ek(u, k, kLax);
      const double rhs =
          sq(sobolev_norm(multiply_rule(ek, ctx.rho_prime),
                          s + sigma + k - 1.0 + rhs_shift)) +
          sq(sobolev_norm(multiply_rule(u, ctx.rho_prime), s)) +
          sq(sobolev_norm(u, -s0));
      return {lhs, rhs};
    }
    case EstimateKind::Appendix11: {
      Field lbu = apply(FieldOpSpec{OpKind::Lb, 0}, u, kLax);
      Field x1u = apply(FieldOpSpec{OpKind::X1k, k}, u, kLax);
      Field ek = apply_Ek(u, k, kLax);
      const double lhs = sq(l2_norm(lbu)) + sq(l2_norm(x1u)) +
                         sq(sobolev_norm(u, -(k - 1.0) / 2.0));
      const double rhs = std::abs(inner_product(ek, u).real());
      return {lhs, rhs};
    }
  }
  throw std::logic_error("estimate_sides: unknown kind");
}

std::vector<double> stressor_lambda_set(const ExperimentConfig& cfg) {
  std::vector<double> out;
  for (int m : {2, 3, 5, 8})
    out.push_back(std::sqrt(m * std::numbers::pi / cfg.box[2]));
  return out;
}

std::vector<double> corpus_ratios(EstimateKind which, const EstCtx& ctx,
                                  const std::vector<Field>& fields) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& u : fields) {
    auto [lhs, rhs] = estimate_sides(which, ctx, u);
    const double scale = sq(sobolev_norm(u, 1.0));
    if (rhs < 1e-14 * scale) continue;  // degenerate sample
    out.push_back(lhs / rhs);
  }
  return out;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

EstimateReport run_estimate(const ExperimentConfig& cfg, EstimateKind which) {
  EstimateReport rep;
  rep.which = to_string(which);
  rep.cfg = cfg;
  const GridSpec base = cfg.grid_spec();
  std::array<int, 3> rc;
  for (int j = 0; j < 3; ++j) {
    int m = static_cast<int>(std::lround(cfg.grid[j] * 1.5));
    rc[j] = m + (m % 2);
  }
  const GridSpec refined = make_grid(cfg.box, rc);
  const CutoffSpec cut{cfg.cutoff_a};
  const std::vector<double> stress = stressor_lambda_set(cfg);

  char desc[128];
  std::snprintf(desc, sizeof(desc), "bumps=%d,stressors=%d,seed=%llu",
                cfg.corpus_size, static_cast<int>(stress.size()),
                static_cast<unsigned long long>(cfg.seed));
  rep.corpus_desc = desc;

  auto build = [&](const GridSpec& g, std::uint64_t seed) {
    std::vector<Field> fields = estimate_corpus(g, cfg.corpus_size, seed, cut);
    std::vector<Field> st = stressor_fields(g, stress, cut);
    for (auto& f : st) fields.push_back(std::move(f));
    return fields;
  };

  const EstCtx ctx_base = make_ctx(cfg, base);
  const EstCtx ctx_ref = make_ctx(cfg, refined);

  std::vector<Field> corpus_base = build(base, cfg.seed);
  rep.ratios = corpus_ratios(which, ctx_base, corpus_base);
  rep.max_ratio = max_of(rep.ratios);

  if (which == EstimateKind::Apriori10) {
    // Stressor diagnostics: the estimate is tight on the oscillatory family,
    // and lowering the right-hand index makes the ratio grow with lambda.
    const std::size_t nstress = stress.size();
    const std::size_t first = corpus_base.size() - nstress;
    for (std::size_t i = 0; i < nstress; ++i) {
      const Field& u = corpus_base[first + i];
      auto [lhs, rhs] = estimate_sides(which, ctx_base, u);
      auto [lhs2, rhs2] = estimate_sides(which, ctx_base, u, -0.5);
      rep.stressor_lambdas.push_back(stress[i]);
      rep.stressor_ratios.push_back(lhs / rhs);
      rep.stressor_ratios_lowered.push_back(lhs2 / rhs2);
    }
    rep.stressor_growth =
        rep.stressor_ratios_lowered.back() >= 2.0 * rep.stressor_ratios_lowered.front();
  }

  corpus_base.clear();
  corpus_base.shrink_to_fit();

  std::vector<Field> corpus_ref = build(refined, cfg.seed);
  rep.ratios_refined = corpus_ratios(which, ctx_ref, corpus_ref);
  rep.refined_max = max_of(rep.ratios_refined);
  corpus_ref.clear();
  corpus_ref.shrink_to_fit();

  std::vector<Field> corpus_re = build(base, cfg.seed + 1);
  rep.ratios_reseeded = corpus_ratios(which, ctx_base, corpus_re);
  rep.reseeded_max = max_of(rep.ratios_reseeded);

  rep.drift_refine = std::abs(rep.refined_max - rep.max_ratio) / rep.max_ratio;
  rep.drift_reseed = std::abs(rep.reseeded_max - rep.max_ratio) / rep.max_ratio;
  rep.pass = rep.drift_refine < rep.drift_tol && rep.drift_reseed < rep.drift_tol;
  if (which == EstimateKind::Apriori10) rep.pass = rep.pass && rep.stressor_growth;
  return rep;
}

// ---------------------------------------------------------------- defaults

std::vector<double> default_lambdas(ScalingKind which) {
  switch (which) {
    case ScalingKind::Prop1: return {3.0, 3.8, 4.8, 6.2, 8.0};
    case ScalingKind::Prop3: return {3.07, 3.76, 4.52, 5.46, 6.51, 7.93};
    default: return {};
  }
}

std::vector<double> default_deltas(ScalingKind which) {
  switch (which) {
    case ScalingKind::Slab: return {0.6, 0.45, 0.34, 0.25, 0.19};
    case ScalingKind::Prop2: return {1e-1, 1e-2, 1e-3, 1e-4};
    default: return {};
  }
}

ExperimentConfig default_config(ScalingKind which) {
  ExperimentConfig cfg;
  cfg.id = to_string(which);
  cfg.lambdas = default_lambdas(which);
  cfg.deltas = default_deltas(which);
  switch (which) {
    case ScalingKind::Prop1:
      cfg.grid = {64, 64, 640};
      cfg.box = {1.0, 1.0, 1.25};
      cfg.cutoff_a = 0.5;
      cfg.k = 1;
      break;
    case ScalingKind::Prop3:
      cfg.grid = {96, 96, 384};
      cfg.box = {4.0, 4.0, 2.0};
      cfg.cutoff_a = 0.8;
      cfg.k = 1;
      cfg.s = 0.0;
      break;
    case ScalingKind::Slab:
      cfg.grid = {256, 64, 64};
      cfg.box = {2.0, 2.0, 2.0};
      break;
    case ScalingKind::Prop2:
      cfg.p = 1;
      cfg.k = 1;
      break;
    case ScalingKind::AppendixProduct:
      break;
  }
  return cfg;
}

}  // namespace heislab::lab
