#include "heislab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "heislab/symbols.hpp"

namespace heislab {

namespace {

// Plans are cached per shape and reused through the new-array interface.
// FFTW_UNALIGNED keeps execution valid for any std::vector buffer.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  fftw_plan dft3(const std::array<int, 3>& n, int sign) {
    std::scoped_lock lock(mu_);
    auto key = std::make_tuple(n[0], n[1], n[2], sign, 0);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
    std::vector<cplx> b(a.size());
    fftw_plan p = fftw_plan_dft_3d(
        n[0], n[1], n[2], reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  // Batched 1-D transforms along the contiguous last axis.
  fftw_plan dft_axis3(const std::array<int, 3>& n, int sign) {
    std::scoped_lock lock(mu_);
    auto key = std::make_tuple(n[0], n[1], n[2], sign, 1);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
    std::vector<cplx> b(a.size());
    const int howmany = n[0] * n[1];
    fftw_plan p = fftw_plan_many_dft(
        1, &n[2], howmany, reinterpret_cast<fftw_complex*>(a.data()), nullptr,
        1, n[2], reinterpret_cast<fftw_complex*>(b.data()), nullptr, 1, n[2],
        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mu_;
  std::map<std::tuple<int, int, int, int, int>, fftw_plan> plans_;
};

void execute(fftw_plan p, const std::vector<cplx>& in, std::vector<cplx>& out) {
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(
                          const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// Center-origin phase: (-1)^{i1+i2+i3}.
inline double parity_sign(int i1, int i2, int i3) {
  return ((i1 + i2 + i3) & 1) ? -1.0 : 1.0;
}

}  // namespace

Field transform(const Field& u) {
  if (u.domain != Domain::Spatial)
    throw DomainError("transform: field must be spatial");
  Field out(u.grid, Domain::Frequency);
  execute(PlanCache::instance().dft3(u.grid.count, FFTW_FORWARD), u.data, out.data);
  const double scale = u.grid.cell_volume();
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1)
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2)
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m)
        out.data[m] *= scale * parity_sign(i1, i2, i3);
  return out;
}

Field inverse_transform(const Field& uhat) {
  if (uhat.domain != Domain::Frequency)
    throw DomainError("inverse_transform: field must be frequency");
  Field tmp = uhat;
  std::size_t m = 0;
  for (int i1 = 0; i1 < uhat.grid.count[0]; ++i1)
    for (int i2 = 0; i2 < uhat.grid.count[1]; ++i2)
      for (int i3 = 0; i3 < uhat.grid.count[2]; ++i3, ++m)
        tmp.data[m] *= parity_sign(i1, i2, i3);
  Field out(uhat.grid, Domain::Spatial);
  execute(PlanCache::instance().dft3(uhat.grid.count, FFTW_BACKWARD), tmp.data,
          out.data);
  const double scale = 1.0 / uhat.grid.box_volume();
  for (auto& v : out.data) v *= scale;
  return out;
}

Field apply_symbol_fn(const Field& u, const SymbolFn& symbol) {
  Field uhat = transform(u);
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1) {
    const double xi1 = u.grid.freq(0, i1);
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2) {
      const double xi2 = u.grid.freq(1, i2);
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m) {
        const cplx s = symbol(xi1, xi2, u.grid.freq(2, i3));
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
          throw std::runtime_error("apply_symbol_fn: non-finite symbol value");
        uhat.data[m] *= s;
      }
    }
  }
  return inverse_transform(uhat);
}

Field apply_symbol_table(const Field& u, const std::vector<double>& table) {
  if (table.size() != u.grid.size())
    throw std::invalid_argument("apply_symbol_table: table size mismatch");
  Field uhat = transform(u);
  for (std::size_t i = 0; i < table.size(); ++i) uhat.data[i] *= table[i];
  return inverse_transform(uhat);
}

double sobolev_norm(const Field& u, double s, NormFlavor flavor) {
  Field uhat = (u.domain == Domain::Frequency) ? u : transform(u);
  const ConeCutoffSpec star = ConeCutoffSpec::star();
  double acc = 0.0;
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1) {
    const double xi1 = u.grid.freq(0, i1);
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2) {
      const double xi2 = u.grid.freq(1, i2);
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m) {
        const double xi3 = u.grid.freq(2, i3);
        double w;
        if (flavor == NormFlavor::Lambda) {
          w = std::pow(1.0 + xi1 * xi1 + xi2 * xi2 + xi3 * xi3, s / 2.0);
        } else {
          w = std::pow(1.0 + xi3 * xi3, s / 2.0) *
              eval_cone(star, xi1, xi2, xi3);
        }
        acc += w * w * std::norm(uhat.data[m]);
      }
    }
  }
  return std::sqrt(acc / u.grid.box_volume());
}

SupportReport support_check(const Field& u, double margin_fraction, double tol) {
  if (!(margin_fraction > 0.0 && margin_fraction < 0.5))
    throw std::invalid_argument("support_check: margin_fraction must be in (0, 0.5)");
  if (u.domain != Domain::Spatial)
    throw DomainError("support_check: field must be spatial");
  double total = 0.0, boundary = 0.0;
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1) {
    const bool b1 = std::abs(u.grid.coord(0, i1)) >=
                    (1.0 - margin_fraction) * u.grid.half_extent[0];
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2) {
      const bool b2 = std::abs(u.grid.coord(1, i2)) >=
                      (1.0 - margin_fraction) * u.grid.half_extent[1];
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m) {
        const bool b3 = std::abs(u.grid.coord(2, i3)) >=
                        (1.0 - margin_fraction) * u.grid.half_extent[2];
        const double mass = std::norm(u.data[m]);
        total += mass;
        if (b1 || b2 || b3) boundary += mass;
      }
    }
  }
  SupportReport rep;
  rep.margin_fraction = margin_fraction;
  rep.tol = tol;
  rep.boundary_mass_fraction = (total > 0.0) ? boundary / total : 0.0;
  rep.pass = rep.boundary_mass_fraction <= tol;
  return rep;
}

Field spectral_derivative(const Field& u, int axis) {
  return apply_symbol_fn(u, [axis](double x1, double x2, double x3) {
    const double xi = (axis == 0) ? x1 : (axis == 1) ? x2 : x3;
    return cplx(0.0, xi);
  });
}

Field translate_frame(const Field& u, const FrameShift& shift, bool check_support) {
  if (u.domain != Domain::Spatial)
    throw DomainError("translate_frame: field must be spatial");
  const double a1 = shift.alpha_re, a2 = shift.alpha_im;
  // Step 1: plain translation by (a1, a2, t0) via a phase in frequency.
  Field uhat = transform(u);
  std::size_t m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1) {
    const double xi1 = u.grid.freq(0, i1);
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2) {
      const double xi2 = u.grid.freq(1, i2);
      for (int i3 = 0; i3 < u.grid.count[2]; ++i3, ++m) {
        const double phase = xi1 * a1 + xi2 * a2 + u.grid.freq(2, i3) * shift.t0;
        uhat.data[m] *= std::polar(1.0, phase);
      }
    }
  }
  Field step1 = inverse_transform(uhat);
  // Step 2: shear x3 -> x3 + 2 a2 y1 - 2 a1 y2, exact per (y1, y2) line.
  Field out(u.grid, Domain::Spatial);
  auto& cache = PlanCache::instance();
  fftw_plan fwd = cache.dft_axis3(u.grid.count, FFTW_FORWARD);
  fftw_plan bwd = cache.dft_axis3(u.grid.count, FFTW_BACKWARD);
  std::vector<cplx> line_spec(u.grid.size());
  execute(fwd, step1.data, line_spec);
  const int n3 = u.grid.count[2];
  m = 0;
  for (int i1 = 0; i1 < u.grid.count[0]; ++i1) {
    const double y1 = u.grid.coord(0, i1);
    for (int i2 = 0; i2 < u.grid.count[1]; ++i2) {
      const double y2 = u.grid.coord(1, i2);
      const double c = 2.0 * a2 * y1 - 2.0 * a1 * y2;
      for (int i3 = 0; i3 < n3; ++i3, ++m)
        line_spec[m] *= std::polar(1.0, u.grid.freq(2, i3) * c);
    }
  }
  execute(bwd, line_spec, out.data);
  const double scale = 1.0 / n3;
  for (auto& v : out.data) v *= scale;
  if (check_support) {
    SupportReport rep = support_check(out, 0.05, 1e-8);
    if (!rep.pass)
      throw SupportError("translate_frame: shifted support leaves the box");
  }
  return out;
}

}  // namespace heislab
