#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "heislab/grid.hpp"

namespace heislab {

using cplx = std::complex<double>;

enum class Domain { Spatial, Frequency };

struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Field {
  GridSpec grid;
  Domain domain = Domain::Spatial;
  std::vector<cplx> data;

  Field() = default;
  Field(const GridSpec& g, Domain d = Domain::Spatial)
      : grid(g), domain(d), data(g.size(), cplx(0.0, 0.0)) {}

  cplx& at(int i1, int i2, int i3) { return data[grid.index(i1, i2, i3)]; }
  const cplx& at(int i1, int i2, int i3) const {
    return data[grid.index(i1, i2, i3)];
  }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx c);
  friend Field operator+(Field a, const Field& b) { a += b; return a; }
  friend Field operator-(Field a, const Field& b) { a -= b; return a; }
};

// Pointwise evaluation rule on box coordinates (x1, x2, x3).
using EvalRule = std::function<cplx(double, double, double)>;

Field sample(const GridSpec& grid, const EvalRule& rule);

// Pointwise product with a coordinate rule, u(x) * f(x).
Field multiply_rule(const Field& u, const EvalRule& rule);
Field multiply_pointwise(const Field& u, const Field& v);

// L2 pairing with the cell measure of the field's domain; linear in u,
// conjugate linear in v.
cplx inner_product(const Field& u, const Field& v);
double l2_norm(const Field& u);

bool all_finite(const Field& u);

}  // namespace heislab
