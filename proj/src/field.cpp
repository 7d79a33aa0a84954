#include "heislab/field.hpp"

#include <cmath>
#include <sstream>

namespace heislab {

namespace {

void require_compatible(const Field& u, const Field& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("field grids differ");
  if (u.domain != v.domain) throw DomainError("field domains differ");
}

}  // namespace

Field& Field::operator+=(const Field& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

Field& Field::operator*=(cplx c) {
  for (auto& v : data) v *= c;
  return *this;
}

Field sample(const GridSpec& grid, const EvalRule& rule) {
  Field f(grid, Domain::Spatial);
  std::size_t m = 0;
  for (int i1 = 0; i1 < grid.count[0]; ++i1) {
    const double x1 = grid.coord(0, i1);
    for (int i2 = 0; i2 < grid.count[1]; ++i2) {
      const double x2 = grid.coord(1, i2);
      for (int i3 = 0; i3 < grid.count[2]; ++i3, ++m) {
        const double x3 = grid.coord(2, i3);
        cplx v;
        try {
          v = rule(x1, x2, x3);
        } catch (const std::exception& e) {
          std::ostringstream os;
          os << "sample: rule failed at (" << x1 << ", " << x2 << ", " << x3
             << "): " << e.what();
          throw std::runtime_error(os.str());
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          std::ostringstream os;
          os << "sample: non-finite value at (" << x1 << ", " << x2 << ", " << x3
             << ")";
          throw std::runtime_error(os.str());
        }
        f.data[m] = v;
      }
    }
  }
  return f;
}

Field multiply_rule(const Field& u, const EvalRule& rule) {
  if (u.domain != Domain::Spatial)
    throw DomainError("multiply_rule: field must be spatial");
  Field f = u;
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1)
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2)
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m)
        f.data[m] *= rule(u.grid.coord(0, i1), u.grid.coord(1, i2), u.grid.coord(2, i3));
  return f;
}

Field multiply_pointwise(const Field& u, const Field& v) {
  require_compatible(u, v);
  Field f = u;
  for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] *= v.data[i];
  return f;
}

cplx inner_product(const Field& u, const Field& v) {
  require_compatible(u, v);
  const double w = (u.domain == Domain::Spatial)
                       ? u.grid.cell_volume()
                       : 1.0 / u.grid.box_volume();
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < u.data.size(); ++i)
    acc += u.data[i] * std::conj(v.data[i]);
  return acc * w;
}

double l2_norm(const Field& u) {
  const double w = (u.domain == Domain::Spatial)
                       ? u.grid.cell_volume()
                       : 1.0 / u.grid.box_volume();
  double acc = 0.0;
  for (const auto& v : u.data) acc += std::norm(v);
  return std::sqrt(acc * w);
}

bool all_finite(const Field& u) {
  for (const auto& v : u.data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace heislab
