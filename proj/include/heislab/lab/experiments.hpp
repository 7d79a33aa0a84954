#pragma once

#include <string>

#include "heislab/lab/report.hpp"

namespace heislab::lab {

enum class ScalingKind { Prop1, Prop3, Slab, Prop2, AppendixProduct };
enum class EstimateKind {
  ThmA,
  GainZero,
  GainMinus,
  GainPlusK0,
  Lemma7,
  Apriori10,
  Appendix11
};

ScalingKind scaling_kind(const std::string& name);
EstimateKind estimate_kind(const std::string& name);
std::string to_string(ScalingKind k);
std::string to_string(EstimateKind k);

// Exact-identity battery: energy balance, adjoints, commutators against
// their algebraic expansions, form equality and nonnegativity, cone
// partition positivity, eigenrelation of the oscillatory family.
IdentityReport run_identity_suite(const ExperimentConfig& cfg);

ScalingReport run_scaling(const ExperimentConfig& cfg, ScalingKind which);

EstimateReport run_estimate(const ExperimentConfig& cfg, EstimateKind which);

// rhs: "ek-bump" solves against a manufactured right-hand side with known
// solution; "bump" solves a plain smooth forcing.
SolveReport run_solve(const ExperimentConfig& cfg, const std::string& rhs = "ek-bump");

// Default sweep values used when the config leaves them empty.
std::vector<double> default_lambdas(ScalingKind which);
std::vector<double> default_deltas(ScalingKind which);
ExperimentConfig default_config(ScalingKind which);

}  // namespace heislab::lab
