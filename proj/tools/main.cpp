#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heislab/lab/experiments.hpp"
#include "heislab/ncalg.hpp"
#include "heislab/symbols.hpp"

namespace {

using namespace heislab;
using namespace heislab::lab;

struct GlobalArgs {
  std::string grid;
  std::string box;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  int corpus = 0;
};

void add_globals(CLI::App* cmd, GlobalArgs& g) {
  cmd->add_option("--grid", g.grid, "Lattice counts, e.g. 64x64x64");
  cmd->add_option("--box", g.box, "Half extents, e.g. 4,4,4");
  cmd->add_option("--seed", g.seed, "Corpus seed");
  cmd->add_option("--out", g.out, "Report output path");
  cmd->add_option("--format", g.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--corpus", g.corpus, "Corpus size");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void apply_globals(ExperimentConfig& cfg, const GlobalArgs& g) {
  if (!g.grid.empty()) {
    if (std::sscanf(g.grid.c_str(), "%dx%dx%d", &cfg.grid[0], &cfg.grid[1],
                    &cfg.grid[2]) != 3)
      throw CLI::ValidationError("--grid expects N1xN2xN3");
  }
  if (!g.box.empty()) {
    auto v = parse_list(g.box);
    if (v.size() != 3) throw CLI::ValidationError("--box expects R1,R2,R3");
    cfg.box = {v[0], v[1], v[2]};
  }
  if (g.seed) cfg.seed = g.seed;
  if (!g.out.empty()) cfg.out = g.out;
  if (!g.format.empty()) cfg.format = g.format;
  if (g.corpus) cfg.corpus_size = g.corpus;
}

template <typename Report>
void emit(const Report& rep, const ExperimentConfig& cfg) {
  if (cfg.out.empty()) return;
  const std::string payload = (cfg.format == "json") ? to_json(rep) : to_csv(rep);
  write_file(cfg.out, payload);
  std::cout << "wrote " << cfg.out << "\n";
}

int cmd_identities(const GlobalArgs& g, int k) {
  ExperimentConfig cfg;
  cfg.id = "identities";
  cfg.corpus_size = 50;
  cfg.k = k;
  apply_globals(cfg, g);
  IdentityReport rep = run_identity_suite(cfg);
  for (const auto& row : rep.rows)
    std::printf("%-24s %12.4e  (threshold %g)  %s\n", row.check.c_str(),
                row.measured, row.threshold, row.pass ? "pass" : "FAIL");
  emit(rep, cfg);
  return rep.pass() ? 0 : 1;
}

int cmd_scaling(const GlobalArgs& g, const std::string& which_name,
                const std::string& lambdas, const std::string& deltas,
                const std::string& eps, int k, double s, int p) {
  ScalingKind which = scaling_kind(which_name);
  ExperimentConfig cfg = default_config(which);
  if (k >= 0) cfg.k = k;
  cfg.s = s;
  if (p > 0) cfg.p = p;
  if (!lambdas.empty()) cfg.lambdas = parse_list(lambdas);
  if (!deltas.empty()) cfg.deltas = parse_list(deltas);
  if (!eps.empty()) cfg.eps = parse_list(eps);
  apply_globals(cfg, g);
  ScalingReport rep = run_scaling(cfg, which);
  for (const auto& se : rep.series) {
    std::printf("%-28s slope %9.4f +/- %.4f  r2 %.6f", se.name.c_str(),
                se.fit.slope, se.fit.stderr_slope, se.fit.r2);
    if (se.oracle_slope) std::printf("  oracle %9.4f", *se.oracle_slope);
    std::printf("  %s\n", se.pass ? "pass" : "FAIL");
  }
  for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
  emit(rep, cfg);
  return rep.pass() ? 0 : 1;
}

int cmd_estimate(const GlobalArgs& g, const std::string& which_name, int k,
                 double s, double s0) {
  EstimateKind which = estimate_kind(which_name);
  ExperimentConfig cfg;
  cfg.id = which_name;
  cfg.k = k;
  cfg.s = s;
  cfg.s0 = s0;
  cfg.corpus_size = 16;
  if (which == EstimateKind::GainPlusK0) cfg.k = 0;
  if (which == EstimateKind::Apriori10 && cfg.k < 1) cfg.k = 2;
  apply_globals(cfg, g);
  EstimateReport rep = run_estimate(cfg, which);
  std::printf("%s: max ratio %.6g refined %.6g reseeded %.6g drift %.3f/%.3f %s\n",
              rep.which.c_str(), rep.max_ratio, rep.refined_max, rep.reseeded_max,
              rep.drift_refine, rep.drift_reseed, rep.pass ? "pass" : "FAIL");
  for (std::size_t i = 0; i < rep.stressor_lambdas.size(); ++i)
    std::printf("  stressor lambda %.4f ratio %.6g lowered-index ratio %.6g\n",
                rep.stressor_lambdas[i], rep.stressor_ratios[i],
                rep.stressor_ratios_lowered[i]);
  emit(rep, cfg);
  return rep.pass ? 0 : 1;
}

int cmd_solve(const GlobalArgs& g, int k, const std::string& rhs) {
  ExperimentConfig cfg;
  cfg.id = "solve";
  cfg.k = k;
  apply_globals(cfg, g);
  SolveReport rep = run_solve(cfg, rhs);
  std::printf("k=%d converged=%d iters=%d residual %.3e eps_reg %.3e\n", rep.k,
              rep.converged, rep.iterations, rep.rel_residual, rep.eps_reg);
  if (rep.recovery_error >= 0.0)
    std::printf("recovery error %.3e\n", rep.recovery_error);
  std::printf("microlocal energy split: plus %.3f zero %.3f\n", rep.plus_fraction,
              rep.zero_fraction);
  std::printf("low-norm ratio: max %.6g drift %.3f/%.3f %s\n", rep.max_ratio,
              rep.drift_refine, rep.drift_reseed, rep.ratios_pass ? "pass" : "FAIL");
  emit(rep, cfg);
  return rep.pass ? 0 : 1;
}

int cmd_algebra(const std::string& verify, int budget) {
  using namespace heislab::ncalg;
  bool ok = true;
  if (verify == "relations") {
    ok = ok && (commutator(NCExpr::l(), NCExpr::lb()) ==
                NCExpr::t().scaled(RatPoly(2)));
    ok = ok && commutator(NCExpr::t(), NCExpr::l()).is_zero();
    ok = ok && (commutator(NCExpr::l(), NCExpr::z()) == NCExpr::one());
    std::printf("[L,Lb] = %s\n",
                commutator(NCExpr::l(), NCExpr::lb()).str().c_str());
    std::printf("relations %s\n", ok ? "pass" : "FAIL");
  } else if (verify == "towers") {
    for (int k = 0; k <= 4; ++k) {
      std::vector<NCExpr> full{NCExpr::lb(), bracket_tower(k, k),
                               bracket_tower(k, k + 1)};
      const int r_full = span_rank_at_origin(full);
      std::vector<NCExpr> short_tower{NCExpr::lb(), x1k(k)};
      for (int j = 1; j < k; ++j) short_tower.push_back(bracket_tower(k, j));
      const int r_short = span_rank_at_origin(short_tower);
      const bool pass = (r_full == 3) && (k == 0 || r_short < 3);
      ok = ok && pass;
      std::printf("k=%d rank(full)=%d rank(short)=%d %s\n", k, r_full, r_short,
                  pass ? "pass" : "FAIL");
    }
  } else if (verify == "ek") {
    for (int k = 0; k <= 4; ++k) {
      NCExpr ek = ek_expand(k);
      const bool selfadj = (ek.adjoint() == ek);
      HState s = apply_to_h(ek);
      int a, b;
      RatPoly c;
      const bool mono = s.single_monomial(a, b, c) && a == k && b == k &&
                        c == RatPoly::monomial(2 * (k + 1), 1);
      ok = ok && selfadj && mono;
      std::printf("k=%d Ek* = Ek: %d;  Ek.h = %s  %s\n", k, selfadj,
                  s.str().c_str(), (selfadj && mono) ? "pass" : "FAIL");
    }
    std::printf("observed eigenvalue sign: +2(k+1) q\n");
  } else if (verify == "s11") {
    for (int k = 1; k <= 3; ++k) {
      S11Report rep = verify_s11_expansion(k);
      std::printf("k=%d corrected first line closes: %d\n", k,
                  rep.corrected_first_line_zero);
      for (const auto& l : rep.lines) {
        if (l.zero)
          std::printf("  %s: exact\n", l.name.c_str());
        else
          std::printf("  %s: residual = %s\n", l.name.c_str(), l.residual.c_str());
      }
      ok = ok && rep.corrected_first_line_zero && rep.lines.back().zero;
    }
  } else if (verify == "localization") {
    for (int p1 = 0; p1 <= budget; ++p1)
      for (int p2 = 0; p1 + p2 <= budget; ++p2) {
        LocalizationReport rep = verify_31(p1, p2, budget);
        ok = ok && rep.all_pass();
        std::printf("(p1,p2)=(%d,%d):", p1, p2);
        for (const auto& c : rep.checks)
          std::printf(" %s=%s", c.name.c_str(),
                      c.exact ? "exact" : (c.residual_matches ? "matched" : "FAIL"));
        std::printf("\n");
      }
  } else {
    std::fprintf(stderr, "unknown --verify target %s\n", verify.c_str());
    return 2;
  }
  std::printf("algebra %s\n", ok ? "pass" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_symbols(const GlobalArgs& g, const std::string& kind, double s,
                double delta) {
  ExperimentConfig cfg;
  apply_globals(cfg, g);
  MultiplierSpec spec;
  if (kind == "lambda") spec = MultiplierSpec::lambda_s(s);
  else if (kind == "psi") spec = MultiplierSpec::psi_s(s);
  else if (kind == "plus") spec = MultiplierSpec::cone_cut(ConeCutoffSpec::plus());
  else if (kind == "zero") spec = MultiplierSpec::cone_cut(ConeCutoffSpec::zero());
  else if (kind == "minus") spec = MultiplierSpec::cone_cut(ConeCutoffSpec::minus());
  else if (kind == "star") spec = MultiplierSpec::cone_cut(ConeCutoffSpec::star());
  else if (kind == "smoother-s") spec = MultiplierSpec::smoother_s(delta);
  else if (kind == "smoother-k") spec = MultiplierSpec::smoother_k(delta);
  else {
    std::fprintf(stderr, "unknown symbol kind %s\n", kind.c_str());
    return 2;
  }
  if (cfg.out.empty()) {
    export_symbol_csv(std::cout, cfg.grid_spec(), spec);
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    export_symbol_csv(os, cfg.grid_spec(), spec);
    std::cout << "wrote " << cfg.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for degenerate complex vector fields"};
  app.require_subcommand(1);
  // One declarative file mirrors the flags, keyed by subcommand section.
  app.set_config("--config", "", "Config file ([subcommand] sections, flag=value lines)");

  GlobalArgs g_id, g_sc, g_es, g_so, g_sy;
  int id_k = 1;
  auto* identities = app.add_subcommand("identities", "Exact identity battery");
  add_globals(identities, g_id);
  identities->add_option("--k", id_k, "Operator index k");

  std::string sc_which, sc_lambdas, sc_deltas, sc_eps;
  int sc_k = -1, sc_p = 0;
  double sc_s = 0.0;
  auto* scaling = app.add_subcommand("scaling", "Power-law sweeps");
  add_globals(scaling, g_sc);
  scaling->add_option("--which", sc_which, "prop1|prop3|slab|prop2|product")
      ->required()
      ->check(CLI::IsMember({"prop1", "prop3", "slab", "prop2", "product"}));
  scaling->add_option("--k", sc_k, "Operator index k");
  scaling->add_option("--lambdas", sc_lambdas, "Comma list of lambda values");
  scaling->add_option("--deltas", sc_deltas, "Comma list of delta values");
  scaling->add_option("--eps", sc_eps, "Comma list of Sobolev orders");
  scaling->add_option("--s", sc_s, "Sobolev shift s");
  scaling->add_option("--p", sc_p, "Derivative order p");

  std::string es_which;
  int es_k = 2;
  double es_s = 0.0, es_s0 = 4.0;
  auto* estimate = app.add_subcommand("estimate", "Bounded-constant harness");
  add_globals(estimate, g_es);
  estimate
      ->add_option("--which", es_which,
                   "thmA|gain0|gainminus|gainplus0|lemma7|apriori10|appendix11")
      ->required()
      ->check(CLI::IsMember({"thmA", "gain0", "gainminus", "gainplus0", "lemma7",
                             "apriori10", "appendix11"}));
  estimate->add_option("--k", es_k, "Operator index k");
  estimate->add_option("--s", es_s, "Sobolev shift s");
  estimate->add_option("--s0", es_s0, "Low norm order");

  int so_k = 1;
  std::string so_rhs = "ek-bump";
  auto* solve = app.add_subcommand("solve", "Regularized conjugate-gradient solve");
  add_globals(solve, g_so);
  solve->add_option("--k", so_k, "Operator index k");
  solve->add_option("--rhs", so_rhs, "ek-bump|bump");

  std::string al_verify = "relations";
  int al_budget = 6;
  auto* algebra = app.add_subcommand("algebra", "Exact operator algebra checks");
  algebra->add_option("--verify", al_verify,
                      "relations|towers|ek|s11|localization");
  algebra->add_option("--budget", al_budget, "Localization index budget");

  std::string sy_kind = "plus";
  double sy_s = 0.0, sy_delta = 0.1;
  auto* symbols = app.add_subcommand("symbols", "Export a symbol table as CSV");
  add_globals(symbols, g_sy);
  symbols->add_option("--kind", sy_kind,
                      "lambda|psi|plus|zero|minus|star|smoother-s|smoother-k");
  symbols->add_option("--s", sy_s, "Sobolev order for lambda/psi");
  symbols->add_option("--delta", sy_delta, "Smoothing parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (identities->parsed()) return cmd_identities(g_id, id_k);
    if (scaling->parsed())
      return cmd_scaling(g_sc, sc_which, sc_lambdas, sc_deltas, sc_eps, sc_k, sc_s,
                         sc_p);
    if (estimate->parsed()) return cmd_estimate(g_es, es_which, es_k, es_s, es_s0);
    if (solve->parsed()) return cmd_solve(g_so, so_k, so_rhs);
    if (algebra->parsed()) return cmd_algebra(al_verify, al_budget);
    if (symbols->parsed()) return cmd_symbols(g_sy, sy_kind, sy_s, sy_delta);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
