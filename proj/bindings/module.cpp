#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heislab/lab/experiments.hpp"
#include "heislab/lab/fit.hpp"
#include "heislab/ncalg.hpp"
#include "heislab/operators.hpp"
#include "heislab/spectral.hpp"
#include "heislab/symbols.hpp"
#include "heislab/witnesses.hpp"

namespace py = pybind11;
using namespace heislab;

namespace {

py::array_t<cplx> field_to_numpy(const Field& f) {
  py::array_t<cplx> out({f.grid.count[0], f.grid.count[1], f.grid.count[2]});
  std::copy(f.data.begin(), f.data.end(), out.mutable_data());
  return out;
}

Field field_from_numpy(const GridSpec& grid, py::array_t<cplx, py::array::c_style> a) {
  if (a.ndim() != 3 || a.shape(0) != grid.count[0] || a.shape(1) != grid.count[1] ||
      a.shape(2) != grid.count[2])
    throw std::invalid_argument("array shape does not match the grid");
  Field f(grid);
  std::copy(a.data(), a.data() + f.data.size(), f.data.begin());
  return f;
}

Field sample_callable(const GridSpec& grid, const py::function& fn) {
  // Vectorized via numpy would be faster; pointwise is enough for smoke use.
  Field f(grid);
  std::size_t m = 0;
  for (int i1 = 0; i1 < grid.count[0]; ++i1)
    for (int i2 = 0; i2 < grid.count[1]; ++i2)
      for (int i3 = 0; i3 < grid.count[2]; ++i3, ++m)
        f.data[m] = fn(grid.coord(0, i1), grid.coord(1, i2), grid.coord(2, i3))
                        .cast<cplx>();
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral laboratory for degenerate complex vector fields";

  py::class_<GridSpec>(m, "GridSpec")
      .def_readonly("half_extent", &GridSpec::half_extent)
      .def_readonly("count", &GridSpec::count)
      .def("spacing", &GridSpec::spacing)
      .def("freq_step", &GridSpec::freq_step)
      .def("nyquist", &GridSpec::nyquist)
      .def("box_volume", &GridSpec::box_volume);
  m.def("make_grid", &make_grid, py::arg("half_extents"), py::arg("counts"));

  py::class_<Field>(m, "Field")
      .def_property_readonly("grid", [](const Field& f) { return f.grid; })
      .def("to_numpy", &field_to_numpy);
  m.def("field_from_numpy", &field_from_numpy);
  m.def("sample", &sample_callable, py::arg("grid"), py::arg("rule"));
  m.def("inner_product", &inner_product);
  m.def("l2_norm", &l2_norm);
  m.def("transform", &transform);
  m.def("inverse_transform", &inverse_transform);
  m.def(
      "sobolev_norm",
      [](const Field& u, double s, const std::string& flavor) {
        return sobolev_norm(u, s,
                            flavor == "psi" ? NormFlavor::Psi : NormFlavor::Lambda);
      },
      py::arg("u"), py::arg("s"), py::arg("flavor") = "lambda");
  m.def("support_check", [](const Field& u, double margin, double tol) {
    SupportReport r = support_check(u, margin, tol);
    return py::make_tuple(r.pass, r.boundary_mass_fraction);
  });
  py::class_<FrameShift>(m, "FrameShift")
      .def(py::init([](double a1, double a2, double t0) {
             return FrameShift{a1, a2, t0};
           }),
           py::arg("alpha_re"), py::arg("alpha_im"), py::arg("t0"))
      .def("inverse", &FrameShift::inverse);
  m.def("translate_frame", &translate_frame, py::arg("u"), py::arg("shift"),
        py::arg("check_support") = true);

  // Microlocal symbols
  py::class_<ConeCutoffSpec>(m, "ConeCutoffSpec")
      .def_static("plus", &ConeCutoffSpec::plus)
      .def_static("zero", &ConeCutoffSpec::zero)
      .def_static("minus", &ConeCutoffSpec::minus)
      .def_static("star", &ConeCutoffSpec::star);
  py::class_<MultiplierSpec>(m, "MultiplierSpec")
      .def_static("lambda_s", &MultiplierSpec::lambda_s)
      .def_static("psi_s", &MultiplierSpec::psi_s)
      .def_static("cone", &MultiplierSpec::cone_cut)
      .def_static("smoother_s", &MultiplierSpec::smoother_s)
      .def_static("smoother_k", &MultiplierSpec::smoother_k,
                  py::arg("delta"), py::arg("plus") = ConeCutoffSpec::plus());
  m.def("smooth_step", &smooth_step);
  m.def("eval_symbol", &eval_symbol);
  m.def("eval_cone", &eval_cone);
  m.def("apply_multiplier", &apply_multiplier);
  m.def("partition_floor", &partition_floor);

  // Model operators
  py::enum_<OpKind>(m, "OpKind")
      .value("L", OpKind::L)
      .value("Lb", OpKind::Lb)
      .value("T", OpKind::T)
      .value("X1k", OpKind::X1k)
      .value("X2", OpKind::X2)
      .value("Ek", OpKind::Ek);
  m.def(
      "apply_op",
      [](OpKind kind, int k, const Field& u, bool strict) {
        OpOptions opt;
        opt.strict_support = strict;
        return apply(FieldOpSpec{kind, k}, u, opt);
      },
      py::arg("kind"), py::arg("k"), py::arg("u"), py::arg("strict") = true);
  m.def(
      "apply_ek",
      [](const Field& u, int k, bool strict) {
        OpOptions opt;
        opt.strict_support = strict;
        return apply_Ek(u, k, opt);
      },
      py::arg("u"), py::arg("k"), py::arg("strict") = true);
  m.def("adjoint_defect", [](OpKind kind, int k, const Field& u, const Field& v) {
    return adjoint_defect(FieldOpSpec{kind, k}, u, v);
  });
  m.def("energy_defect", &energy_defect);
  m.def("form_value", [](const Field& u, int k) {
    auto [a, b] = form_value(u, k);
    return py::make_tuple(a, b);
  });
  m.def("numeric_commutator",
        [](OpKind a, int ka, OpKind b, int kb, const Field& u) {
          OpOptions lax;
          lax.strict_support = false;
          return numeric_commutator(FieldOpSpec{a, ka}, FieldOpSpec{b, kb}, u, lax);
        });

  // Witness families
  py::class_<CutoffSpec>(m, "CutoffSpec")
      .def(py::init([](double a) {
             CutoffSpec c;
             c.a = a;
             return c;
           }),
           py::arg("a") = 1.0);
  m.def("sample_cutoff", [](const GridSpec& g, const CutoffSpec& c) {
    return sample(g, make_cutoff(c));
  });
  m.def("sample_g_lambda", [](const GridSpec& g, double lambda, const CutoffSpec& c) {
    return sample(g, make_g_lambda(lambda, c));
  });
  m.def("sample_h_lambda", [](const GridSpec& g, double lambda) {
    return sample(g, make_h_lambda(lambda));
  });
  m.def("sample_u_delta", [](const GridSpec& g, double delta, int p) {
    return sample(g, make_u_delta(delta, p));
  });
  py::class_<EhrenpreisLocalizer>(m, "EhrenpreisLocalizer")
      .def(py::init<int, double, double>(), py::arg("n"), py::arg("e"),
           py::arg("core") = 1.0)
      .def("__call__", &EhrenpreisLocalizer::operator())
      .def("derivative_sup", &EhrenpreisLocalizer::derivative_sup);
  m.def("dj_sequence", &dj_sequence);

  // Exact operator algebra
  {
    using namespace ncalg;
    py::class_<NCExpr>(m, "NCExpr")
        .def_static("z", &NCExpr::z)
        .def_static("zb", &NCExpr::zb)
        .def_static("phi", &NCExpr::phi)
        .def_static("t", &NCExpr::t)
        .def_static("l", &NCExpr::l)
        .def_static("lb", &NCExpr::lb)
        .def("__add__", [](const NCExpr& a, const NCExpr& b) { return a + b; })
        .def("__sub__", [](const NCExpr& a, const NCExpr& b) { return a - b; })
        .def("__mul__", [](const NCExpr& a, const NCExpr& b) { return a * b; })
        .def("__eq__", [](const NCExpr& a, const NCExpr& b) { return a == b; })
        .def("is_zero", &NCExpr::is_zero)
        .def("adjoint", &NCExpr::adjoint)
        .def("__str__", &NCExpr::str);
    m.def("commutator", &ncalg::commutator);
    m.def("x1k", &ncalg::x1k);
    m.def("bracket_tower", &ncalg::bracket_tower);
    m.def("ek_expand", &ncalg::ek_expand);
    m.def("span_rank_at_origin", &ncalg::span_rank_at_origin);
    m.def("apply_to_h", [](const NCExpr& e) { return apply_to_h(e).str(); });
    m.def("t_localization", &ncalg::t_localization, py::arg("p1"), py::arg("p2"),
          py::arg("phi_base") = 0);
    m.def("verify_31", [](int p1, int p2, int budget) {
      auto rep = ncalg::verify_31(p1, p2, budget);
      py::list checks;
      for (const auto& c : rep.checks)
        checks.append(py::make_tuple(c.name, c.exact, c.residual_matches,
                                     c.terminal_terms, c.relocalized_terms));
      return checks;
    }, py::arg("p1"), py::arg("p2"), py::arg("budget") = 6);
    m.def("verify_s11_expansion", [](int k) {
      auto rep = ncalg::verify_s11_expansion(k);
      py::list lines;
      for (const auto& l : rep.lines)
        lines.append(py::make_tuple(l.name, l.zero, l.residual));
      return py::make_tuple(rep.corrected_first_line_zero, lines);
    });
  }

  // Fitting
  m.def("fit_power_law", [](const std::vector<std::pair<double, double>>& pts) {
    lab::PowerLawFit f = lab::fit_power_law(pts);
    return py::make_tuple(f.slope, f.stderr_slope, f.r2);
  });
}
