#pragma once

#include <cstdint>
#include <vector>

#include "heislab/field.hpp"
#include "heislab/witnesses.hpp"

namespace heislab::lab {

// Deterministic generator, stable across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next();
  double uniform(double a, double b);

 private:
  std::uint64_t state_;
};

// Random superpositions of Gaussian bumps with centers well inside the
// margin. Spectrally clean; used for the identity checks.
std::vector<Field> identity_corpus(const GridSpec& grid, int count,
                                   std::uint64_t seed);

// Bump superpositions multiplied by the product cutoff; used by the
// estimate harness.
std::vector<Field> estimate_corpus(const GridSpec& grid, int count,
                                   std::uint64_t seed, const CutoffSpec& cutoff);

// Designed stressors rho * h_lambda for the provided frequencies.
std::vector<Field> stressor_fields(const GridSpec& grid,
                                   const std::vector<double>& lambdas,
                                   const CutoffSpec& cutoff);

}  // namespace heislab::lab
