#include "heislab/symbols.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "heislab/spectral.hpp"

using namespace heislab;

namespace {
const GridSpec kGrid = make_grid({4.0, 4.0, 4.0}, {64, 64, 64});
}

TEST_CASE("smooth step endpoints and symmetry") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(-2.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(3.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // strictly increasing inside
  double prev = 0.0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double v = smooth_step(x);
    CHECK(v > prev);
    prev = v;
  }
  // derivative consistent with finite differences
  for (double x : {0.2, 0.5, 0.8}) {
    const double h = 1e-6;
    const double fd = (smooth_step(x + h) - smooth_step(x - h)) / (2.0 * h);
    CHECK(smooth_step_deriv(x) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("cone symbol values at reference rays") {
  const auto plus = ConeCutoffSpec::plus();
  const auto zero = ConeCutoffSpec::zero();
  const auto star = ConeCutoffSpec::star();
  CHECK(eval_cone(plus, 0.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(eval_cone(zero, 1.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(eval_cone(plus, 1.0, 0.0, 0.0) == 0.0);       // ratio 0 <= 4/9
  CHECK(eval_cone(plus, 0.0, 0.0, 0.3) == 0.0);       // below radial floor
  CHECK(eval_cone(zero, 0.0, 0.0, 2.0) == 0.0);       // ratio 1 >= 5/6
  CHECK(eval_cone(star, 0.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(eval_cone(star, 1.0, 0.0, 0.05) == 0.0);      // ratio below 1/6
  CHECK(eval_cone(star, 0.0, 0.0, 0.2) == 0.0);       // radius below 1/3
  // psi^s at a pure t-frequency where the star symbol is 1
  CHECK(eval_symbol(MultiplierSpec::psi_s(2.0), 0.0, 0.0, 2.0) ==
        doctest::Approx(5.0));
  CHECK(eval_symbol(MultiplierSpec::psi_s(-1.0), 0.0, 0.0, 2.0) ==
        doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("minus is the reflection of plus") {
  const auto plus = ConeCutoffSpec::plus();
  const auto minus = ConeCutoffSpec::minus();
  for (int i1 : {0, 5, 20, 40})
    for (int i3 : {1, 7, 33, 50}) {
      const double xi1 = kGrid.freq(0, i1), xi3 = kGrid.freq(2, i3);
      CHECK(eval_cone(minus, xi1, 0.3, xi3) ==
            eval_cone(plus, -xi1, -0.3, -xi3));
    }
}

TEST_CASE("homogeneity along rays beyond the plateau") {
  for (const auto& spec : {ConeCutoffSpec::plus(), ConeCutoffSpec::zero(),
                           ConeCutoffSpec::minus(), ConeCutoffSpec::star()}) {
    for (double d1 : {0.0, 0.3, 0.7, 1.0})
      for (double d3 : {-1.0, -0.5, 0.1, 0.6, 1.0}) {
        const double n = std::sqrt(d1 * d1 + d3 * d3);
        if (n == 0.0) continue;
        const double base = eval_cone(spec, d1 / n, 0.0, d3 / n);
        for (double r : {1.0, 2.5, 7.0, 31.0}) {
          CHECK(std::abs(eval_cone(spec, r * d1 / n, 0.0, r * d3 / n) - base) <=
                1e-12);
        }
      }
  }
}

TEST_CASE("zero cone covers the derivative support of plus") {
  // Wherever a finite difference of the plus symbol is nonzero at |xi| >= 1,
  // the zero symbol equals 1 on the whole stencil.
  const auto plus = ConeCutoffSpec::plus();
  const auto zero = ConeCutoffSpec::zero();
  const double h = 0.02;
  for (double x1 = 0.0; x1 <= 4.0; x1 += 0.11)
    for (double x3 = -4.0; x3 <= 4.0; x3 += 0.11) {
      const double r = std::sqrt(x1 * x1 + x3 * x3);
      if (r < 1.0) continue;
      for (int axis = 0; axis < 2; ++axis) {
        const double d1 = axis == 0 ? h : 0.0, d3 = axis == 1 ? h : 0.0;
        const double f0 = eval_cone(plus, x1, 0.0, x3);
        const double f1 = eval_cone(plus, x1 + d1, 0.0, x3 + d3);
        if (f0 != f1) {
          CHECK(eval_cone(zero, x1, 0.0, x3) == doctest::Approx(1.0));
          CHECK(eval_cone(zero, x1 + d1, 0.0, x3 + d3) == doctest::Approx(1.0));
        }
      }
    }
}

TEST_CASE("psi product law where the star symbol is 1") {
  // psi^s psi^s' = psi^{s+s'} gamma* on the support of the plus/minus cones.
  const auto star = ConeCutoffSpec::star();
  for (double x1 : {0.0, 0.4, 1.0})
    for (double x3 : {1.0, 2.0, 6.0}) {
      if (eval_cone(star, x1, 0.0, x3) < 1.0) continue;
      const double a = eval_symbol(MultiplierSpec::psi_s(0.75), x1, 0.0, x3) *
                       eval_symbol(MultiplierSpec::psi_s(-0.25), x1, 0.0, x3);
      const double b = eval_symbol(MultiplierSpec::psi_s(0.5), x1, 0.0, x3);
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
    }
}

TEST_CASE("psi envelope constants on the star support") {
  double cmin = 1e300, cmax = 0.0;
  for (int i1 = 0; i1 < kGrid.count[0]; i1 += 3)
    for (int i2 = 0; i2 < kGrid.count[1]; i2 += 3)
      for (int i3 = 0; i3 < kGrid.count[2]; i3 += 3) {
        const double xi1 = kGrid.freq(0, i1), xi2 = kGrid.freq(1, i2),
                     xi3 = kGrid.freq(2, i3);
        const double g = eval_cone(ConeCutoffSpec::star(), xi1, xi2, xi3);
        if (g < 1e-9) continue;
        const double psi = eval_symbol(MultiplierSpec::psi_s(1.0), xi1, xi2, xi3);
        const double lam =
            std::pow(1.0 + xi1 * xi1 + xi2 * xi2 + xi3 * xi3, 0.5) * g;
        const double c = psi / lam;
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
  CHECK(cmin > 0.0);
  CHECK(cmax < 1e300);
  MESSAGE("psi envelope constants: c=", cmin, " C=", cmax);
}

TEST_CASE("smoothers") {
  CHECK(eval_symbol(MultiplierSpec::smoother_s(0.0), 3.0, -2.0, 9.0) == 1.0);
  CHECK(eval_symbol(MultiplierSpec::smoother_s(0.5), 0.0, 0.0, 0.0) == 1.0);
  // chi(delta xi) vanishes once |delta xi| >= 2
  CHECK(eval_symbol(MultiplierSpec::smoother_s(0.5), 4.1, 0.0, 0.0) == 0.0);
  // kappa_delta vanishes for |xi3| >= 2/delta and matches omega(0) = 1
  const double delta = 0.25;
  CHECK(eval_symbol(MultiplierSpec::smoother_k(delta), 0.0, 0.0, 9.0) == 0.0);
  const double v = eval_symbol(MultiplierSpec::smoother_k(delta), 0.0, 0.0, 2.0);
  CHECK(v == doctest::Approx(eval_cone(ConeCutoffSpec::plus(), 0.0, 0.0, 2.0)));
}

TEST_CASE("multiplier tables: range, cache, identity") {
  auto table = make_multiplier(kGrid, MultiplierSpec::cone_cut(ConeCutoffSpec::plus()));
  for (double v : *table) {
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
  }
  auto again = make_multiplier(kGrid, MultiplierSpec::cone_cut(ConeCutoffSpec::plus()));
  CHECK(table.get() == again.get());  // served from the cache
  CHECK_THROWS(make_multiplier(kGrid, MultiplierSpec::lambda_s(100.0)));

  // Lambda^0 is the identity; Lambda^s then Lambda^{-s} round-trips.
  Field u = sample(kGrid, [](double x1, double x2, double x3) {
    return cplx(std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / 0.8), 0.0);
  });
  Field id = apply_multiplier(u, MultiplierSpec::lambda_s(0.0));
  Field rt = apply_multiplier(apply_multiplier(u, MultiplierSpec::lambda_s(1.5)),
                              MultiplierSpec::lambda_s(-1.5));
  double e_id = 0.0, e_rt = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    e_id += std::norm(id.data[i] - u.data[i]);
    e_rt += std::norm(rt.data[i] - u.data[i]);
    den += std::norm(u.data[i]);
  }
  CHECK(std::sqrt(e_id / den) <= 1e-13);
  CHECK(std::sqrt(e_rt / den) <= 1e-12);
}

TEST_CASE("partition of the sphere is bounded below") {
  const double floor = partition_floor(kGrid);
  CHECK(floor >= 0.9);
  // Reference rays: each is covered by a single symbol already.
  const auto plus = ConeCutoffSpec::plus();
  const auto zero = ConeCutoffSpec::zero();
  CHECK(eval_cone(plus, 0.8, 0.0, 0.6 / 0.8 * 0.8) >= 0.0);
  double s1 = eval_cone(plus, 0.8, 0.0, 0.6) + eval_cone(zero, 0.8, 0.0, 0.6) +
              eval_cone(ConeCutoffSpec::minus(), 0.8, 0.0, 0.6);
  CHECK(s1 >= 1.0);
  double s2 = eval_cone(plus, 1.0, 0.0, 0.0) + eval_cone(zero, 1.0, 0.0, 0.0) +
              eval_cone(ConeCutoffSpec::minus(), 1.0, 0.0, 0.0);
  CHECK(s2 >= 1.0);
}

TEST_CASE("symbol csv export") {
  GridSpec tiny = make_grid({1.0, 1.0, 1.0}, {8, 8, 8});
  std::ostringstream os;
  export_symbol_csv(os, tiny, MultiplierSpec::cone_cut(ConeCutoffSpec::plus()));
  const std::string s = os.str();
  CHECK(s.rfind("k1,k2,k3,xi1,xi2,xi3,value\n", 0) == 0);
  std::size_t rows = 0;
  for (char c : s)
    if (c == '\n') ++rows;
  CHECK(rows == 1 + 8 * 8 * 8);
}
