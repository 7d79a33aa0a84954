#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heislab/lab/config.hpp"
#include "heislab/lab/fit.hpp"

namespace heislab::lab {

// One measured quantity over a sweep, with its fit and oracle.
struct ScalingSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> measured;
  std::vector<double> oracle;  // empty when no pointwise oracle exists
  PowerLawFit fit;
  std::optional<double> oracle_slope;
  std::optional<double> slope_tol;   // pass iff |slope - oracle| <= tol
  std::optional<double> slope_floor; // pass iff slope >= floor
  std::optional<double> slope_cap;   // pass iff slope <= cap
  bool pass = true;
};

struct ScalingReport {
  std::string which;
  std::string sweep_name;
  ExperimentConfig cfg;
  std::vector<ScalingSeries> series;
  std::vector<std::string> notes;
  bool pass() const;
};

struct EstimateReport {
  std::string which;
  std::string corpus_desc;
  ExperimentConfig cfg;
  std::vector<double> ratios;           // base grid
  std::vector<double> ratios_refined;   // one refinement step
  std::vector<double> ratios_reseeded;  // same grid, reseeded corpus
  double max_ratio = 0.0;
  double refined_max = 0.0;
  double reseeded_max = 0.0;
  double drift_refine = 0.0;
  double drift_reseed = 0.0;
  double drift_tol = 0.2;
  // Stressor diagnostics (per lambda), populated by the apriori sweep.
  std::vector<double> stressor_lambdas;
  std::vector<double> stressor_ratios;
  std::vector<double> stressor_ratios_lowered;
  bool stressor_growth = false;
  bool pass = false;
};

struct IdentityRow {
  std::string check;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct IdentityReport {
  ExperimentConfig cfg;
  std::vector<IdentityRow> rows;
  bool pass() const;
};

struct SolveReport {
  ExperimentConfig cfg;
  int k = 1;
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0.0;
  double eps_reg = 0.0;
  double scale = 0.0;
  double recovery_error = -1.0;    // vs a known solution, when available
  bool energy_monotone = true;
  double plus_fraction = 0.0;      // energy share of the + microlocalization
  double zero_fraction = 0.0;
  std::vector<double> ratio_corpus;  // ||v||_{-k+1} / ||Ek v||
  double max_ratio = 0.0;
  double refined_max = 0.0;
  double reseeded_max = 0.0;
  double drift_refine = 0.0;
  double drift_reseed = 0.0;
  bool ratios_pass = false;
  bool pass = false;
};

// Deterministic emission. CSV carries a metadata header with the config
// hash; JSON preserves insertion order. Identical config + seed gives
// byte-identical output.
std::string to_csv(const ScalingReport& r);
std::string to_json(const ScalingReport& r);
std::string to_csv(const EstimateReport& r);
std::string to_json(const EstimateReport& r);
std::string to_csv(const IdentityReport& r);
std::string to_json(const IdentityReport& r);
std::string to_csv(const SolveReport& r);
std::string to_json(const SolveReport& r);

// Writes to cfg.out (or returns the payload when out is empty).
void write_file(const std::string& path, const std::string& payload);

}  // namespace heislab::lab
