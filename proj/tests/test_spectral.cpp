#include "heislab/spectral.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heislab/lab/corpus.hpp"

using namespace heislab;

namespace {

const GridSpec kGrid = make_grid({4.0, 4.0, 4.0}, {64, 64, 64});

Field random_smooth(std::uint64_t seed) {
  return lab::identity_corpus(kGrid, 1, seed)[0];
}

}  // namespace

TEST_CASE("grid construction and lattice") {
  GridSpec g = make_grid({4.0, 4.0, 4.0}, {64, 64, 64});
  CHECK(g.spacing(0) == doctest::Approx(0.125));
  CHECK(g.freq_step(0) == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(g.freq(0, 1) == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(g.freq(0, 63) == doctest::Approx(-std::numbers::pi / 4.0));
  GridSpec g2 = make_grid({2.0, 2.0, 8.0}, {32, 32, 256});
  CHECK(g2.nyquist(2) == doctest::Approx(std::numbers::pi / 0.0625));
  CHECK_THROWS(make_grid({4.0, 4.0, 4.0}, {63, 64, 64}));
  CHECK_THROWS(make_grid({4.0, 4.0, 4.0}, {4, 64, 64}));
  CHECK_THROWS(make_grid({-1.0, 4.0, 4.0}, {64, 64, 64}));
}

TEST_CASE("sampling rules") {
  Field one = sample(kGrid, [](double, double, double) { return cplx(1.0, 0.0); });
  for (const auto& v : one.data) REQUIRE(v == cplx(1.0, 0.0));
  Field zb = sample(kGrid, [](double x1, double x2, double) {
    return cplx(x1, -x2);
  });
  CHECK(zb.at(40, 48, 32) == cplx(1.0, -2.0));  // node (1, 2, 0)
  CHECK_THROWS(sample(kGrid, [](double, double, double) {
    return cplx(std::nan(""), 0.0);
  }));
}

TEST_CASE("inner product equals box volume on constants") {
  Field one = sample(kGrid, [](double, double, double) { return cplx(1.0, 0.0); });
  CHECK(inner_product(one, one).real() == doctest::Approx(512.0).epsilon(1e-12));
}

TEST_CASE("gaussian inner product against the closed form") {
  // z-profile integral of exp(-4|z|^2) is pi/4 per unit length in t.
  Field u = sample(kGrid, [](double x1, double x2, double) {
    return cplx(std::exp(-2.0 * (x1 * x1 + x2 * x2)), 0.0);
  });
  const double expected = std::numbers::pi / 4.0 * 8.0;
  CHECK(inner_product(u, u).real() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("conjugate symmetry of the pairing") {
  Field u = random_smooth(7), v = random_smooth(8);
  const cplx a = inner_product(u, v);
  const cplx b = inner_product(v, u);
  CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::abs(a));
}

TEST_CASE("single lattice mode transforms to a volume peak") {
  const double xi0 = kGrid.freq(0, 3);
  Field u = sample(kGrid, [xi0](double x1, double, double) {
    return std::polar(1.0, xi0 * x1);
  });
  Field uhat = transform(u);
  CHECK(std::abs(uhat.at(3, 0, 0) - cplx(512.0, 0.0)) <= 1e-9 * 512.0);
  double off = 0.0;
  uhat.at(3, 0, 0) = 0.0;
  for (const auto& v : uhat.data) off = std::max(off, std::abs(v));
  CHECK(off <= 1e-9 * 512.0);
}

TEST_CASE("round trip and Parseval") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Field u = random_smooth(seed);
    Field back = inverse_transform(transform(u));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i) {
      num += std::norm(back.data[i] - u.data[i]);
      den += std::norm(u.data[i]);
    }
    CHECK(std::sqrt(num / den) <= 1e-12);

    Field v = random_smooth(seed + 100);
    const cplx spatial = inner_product(u, v);
    const cplx freq = inner_product(transform(u), transform(v));
    CHECK(std::abs(spatial - freq) <= 1e-12 * std::abs(spatial));
  }
  Field u = random_smooth(4);
  CHECK_THROWS(transform(transform(u)));
  CHECK_THROWS(inverse_transform(u));
}

TEST_CASE("multiplier composition is the pointwise symbol product") {
  Field u = random_smooth(11);
  auto s1 = [](double x1, double x2, double x3) {
    return cplx(1.0 / (1.0 + x1 * x1 + x2 * x2 + x3 * x3), 0.0);
  };
  auto s2 = [](double x1, double, double x3) {
    return cplx(std::cos(x1) + 2.0, 0.5 * std::sin(x3));
  };
  Field a = apply_symbol_fn(apply_symbol_fn(u, s1), s2);
  Field b = apply_symbol_fn(u, [&](double x1, double x2, double x3) {
    return s1(x1, x2, x3) * s2(x1, x2, x3);
  });
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num = std::max(num, std::abs(a.data[i] - b.data[i]));
    den = std::max(den, std::abs(b.data[i]));
  }
  CHECK(num <= 1e-13 * den);
}

TEST_CASE("sobolev norm basics") {
  Field u = random_smooth(13);
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(l2_norm(u)).epsilon(1e-13));
  // Monotone in s.
  double prev = 0.0;
  bool first = true;
  for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    const double n = sobolev_norm(u, s);
    if (!first) CHECK(n >= prev * (1.0 - 1e-13));
    prev = n;
    first = false;
  }
  // Single mode: exact closed form.
  const double xi0 = kGrid.freq(2, 5);
  Field mode = sample(kGrid, [xi0](double, double, double x3) {
    return std::polar(1.0, xi0 * x3);
  });
  const double expected = std::sqrt(512.0) * (1.0 + xi0 * xi0);
  CHECK(sobolev_norm(mode, 2.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sobolev norm matches a direct lattice sum") {
  Field u = random_smooth(17);
  Field uhat = transform(u);
  double acc = 0.0;
  std::size_t m = 0;
  for (int i1 = 0; i1 < kGrid.count[0]; ++i1)
    for (int i2 = 0; i2 < kGrid.count[1]; ++i2)
      for (int i3 = 0; i3 < kGrid.count[2]; ++i3, ++m) {
        const double xi1 = kGrid.freq(0, i1), xi2 = kGrid.freq(1, i2),
                     xi3 = kGrid.freq(2, i3);
        acc += (1.0 + xi1 * xi1 + xi2 * xi2 + xi3 * xi3) * std::norm(uhat.data[m]);
      }
  const double direct = std::sqrt(acc / kGrid.box_volume());
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("support check") {
  Field u = random_smooth(19);
  CHECK(support_check(u, 0.1, 1e-10).pass);
  Field one = sample(kGrid, [](double, double, double) { return cplx(1.0, 0.0); });
  CHECK(!support_check(one, 0.1, 1e-10).pass);
  CHECK_THROWS(support_check(u, 0.7, 1e-10));
}

TEST_CASE("frame translation") {
  Field u = random_smooth(23);
  // Zero shift is the identity.
  Field same = translate_frame(u, FrameShift{0.0, 0.0, 0.0});
  double dev = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i)
    dev = std::max(dev, std::abs(same.data[i] - u.data[i]));
  CHECK(dev <= 1e-12);

  // Composition with the inverse returns the field.
  FrameShift sh{0.35, -0.2, 0.4};
  Field fwd = translate_frame(u, sh);
  Field back = translate_frame(fwd, sh.inverse());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    num += std::norm(back.data[i] - u.data[i]);
    den += std::norm(u.data[i]);
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}

TEST_CASE("frame translation moves coordinates") {
  // A shifted gaussian recenters exactly; sample against the closed form.
  FrameShift sh{0.5, 0.25, 0.3};
  Field u = sample(kGrid, [](double x1, double x2, double x3) {
    return cplx(std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / 0.36), 0.0);
  });
  Field moved = translate_frame(u, sh);
  // moved(y) = u evaluated at the frame-shift preimage of y.
  const double a1 = sh.alpha_re, a2 = sh.alpha_im;
  Field expect = sample(kGrid, [&](double y1, double y2, double y3) {
    const double x1 = y1 + a1, x2 = y2 + a2;
    const double x3 = y3 + sh.t0 + 2.0 * a2 * y1 - 2.0 * a1 * y2;
    return cplx(std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / 0.36), 0.0);
  });
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.data.size(); ++i) {
    num += std::norm(moved.data[i] - expect.data[i]);
    den += std::norm(expect.data[i]);
  }
  CHECK(std::sqrt(num / den) <= 1e-8);
}
