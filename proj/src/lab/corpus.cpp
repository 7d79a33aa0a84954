#include "heislab/lab/corpus.hpp"

#include <cmath>

namespace heislab::lab {

std::uint64_t Rng::next() {
  state_ ^= state_ << 13;
  state_ ^= state_ >> 7;
  state_ ^= state_ << 17;
  return state_;
}

double Rng::uniform(double a, double b) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return a + (b - a) * u;
}

namespace {

struct Bump {
  double c1, c2, c3, width;
  cplx amp;
};

EvalRule bump_superposition(std::vector<Bump> bumps) {
  return [bumps = std::move(bumps)](double x1, double x2, double x3) {
    cplx acc(0.0, 0.0);
    for (const auto& b : bumps) {
      const double d2 = (x1 - b.c1) * (x1 - b.c1) + (x2 - b.c2) * (x2 - b.c2) +
                        (x3 - b.c3) * (x3 - b.c3);
      acc += b.amp * std::exp(-d2 / (2.0 * b.width * b.width));
    }
    return acc;
  };
}

std::vector<Bump> draw_bumps(Rng& rng, const GridSpec& grid, double center_frac,
                             double wmin, double wmax) {
  const int n = 1 + static_cast<int>(rng.next() % 10);
  std::vector<Bump> bumps;
  bumps.reserve(n);
  for (int i = 0; i < n; ++i) {
    Bump b;
    b.c1 = rng.uniform(-center_frac * grid.half_extent[0], center_frac * grid.half_extent[0]);
    b.c2 = rng.uniform(-center_frac * grid.half_extent[1], center_frac * grid.half_extent[1]);
    b.c3 = rng.uniform(-center_frac * grid.half_extent[2], center_frac * grid.half_extent[2]);
    b.width = rng.uniform(wmin, wmax);
    b.amp = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    bumps.push_back(b);
  }
  return bumps;
}

}  // namespace

std::vector<Field> identity_corpus(const GridSpec& grid, int count,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Field> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    // Narrow widths and central supports keep both the dual-lattice tail and
    // the box-boundary tail at roundoff level at 64^3; the identity
    // thresholds rely on that.
    auto bumps = draw_bumps(rng, grid, 0.2, 0.30, 0.42);
    out.push_back(sample(grid, bump_superposition(std::move(bumps))));
  }
  return out;
}

std::vector<Field> estimate_corpus(const GridSpec& grid, int count,
                                   std::uint64_t seed, const CutoffSpec& cutoff) {
  Rng rng(seed);
  const EvalRule rho = make_cutoff(cutoff);
  std::vector<Field> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto bumps = draw_bumps(rng, grid, 0.25, 0.35, 0.8);
    auto rule = bump_superposition(std::move(bumps));
    out.push_back(sample(grid, [&rho, &rule](double x1, double x2, double x3) {
      return rho(x1, x2, x3) * rule(x1, x2, x3);
    }));
  }
  return out;
}

std::vector<Field> stressor_fields(const GridSpec& grid,
                                   const std::vector<double>& lambdas,
                                   const CutoffSpec& cutoff) {
  const EvalRule rho = make_cutoff(cutoff);
  std::vector<Field> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const EvalRule h = make_h_lambda(lambda);
    out.push_back(sample(grid, [&rho, &h](double x1, double x2, double x3) {
      return rho(x1, x2, x3) * h(x1, x2, x3);
    }));
  }
  return out;
}

}  // namespace heislab::lab
