#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdbar/config.hpp"
#include "qdbar/limits.hpp"
#include "qdbar/runner.hpp"
#include "qdbar/version.hpp"

namespace py = pybind11;
using namespace qdbar;

namespace {

FamilySpec family_spec(const std::string& kind, double alpha, double beta) {
  FamilySpec s;
  s.alpha = alpha;
  s.beta = beta;
  if (kind == "unilateral_example") s.kind = FamilyKind::UnilateralExample;
  else if (kind == "bilateral_rational") s.kind = FamilyKind::BilateralRational;
  else if (kind == "bilateral_arctan") s.kind = FamilyKind::BilateralArctan;
  else throw ParameterError("unknown family kind: " + kind);
  return s;
}

QtKernelMode parse_mode(const std::string& m) {
  if (m == "corrected") return QtKernelMode::Corrected;
  if (m == "printed") return QtKernelMode::Printed;
  throw ParameterError("qt mode must be 'corrected' or 'printed'");
}

/// Accepts a coordinate name or a list of (side, n, kind, coeffs) tuples.
LambdaElement to_element(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return coordinate_element(obj.cast<std::string>());
  std::vector<ElementBand> bands;
  for (const auto& item : obj) {
    const auto t = item.cast<py::tuple>();
    if (t.size() != 4) throw ParameterError("band must be (side, n, kind, coeffs)");
    ElementBand b;
    const auto side = t[0].cast<std::string>();
    if (side == "f") b.side = BandSide::F;
    else if (side == "g") b.side = BandSide::G;
    else if (side == "diag") b.side = BandSide::Diag;
    else throw ParameterError("band side must be f, g or diag");
    b.n = t[1].cast<int>();
    b.kind = t[2].cast<std::string>();
    if (b.kind != "poly" && b.kind != "sqrt_poly") throw ParameterError("band kind must be poly or sqrt_poly");
    b.coeffs = t[3].cast<std::vector<double>>();
    bands.push_back(std::move(b));
  }
  return build_element(bands);
}

template <class Real>
py::dict bands_dict(const BasicBandMatrix<Real>& a) {
  py::dict d;
  for (const auto& [off, v] : a.bands) {
    py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
    auto m = arr.mutable_unchecked<1>();
    for (std::size_t j = 0; j < v.size(); ++j) m(static_cast<py::ssize_t>(j)) = static_cast<double>(v[j]);
    d[py::int_(off)] = arr;
  }
  return d;
}

py::list series_list(const ConvergenceSeries& s) {
  py::list out;
  for (const auto& r : s.records) {
    py::dict d;
    d["t"] = r.t;
    d["window_lo"] = r.window_lo;
    d["window_hi"] = r.window_hi;
    d["primary_value"] = r.primary_value;
    d["reference_value"] = r.reference_value;
    d["abs_error"] = r.abs_error;
    d["tail_bound"] = r.tail_bound;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_qdbar, m) {
  m.doc() = "Quantum disk and annulus d-bar toolkit";
  m.attr("__version__") = kVersion;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_TypeError);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<WeightFamily>(m, "WeightFamily")
      .def(py::init([](const std::string& kind, double alpha, double beta) {
             return make_family(family_spec(kind, alpha, beta));
           }),
           py::arg("kind") = "unilateral_example", py::arg("alpha") = 0.0, py::arg("beta") = 0.0)
      .def("weight", [](const WeightFamily& f, double t, Index k) { return weight_value(f, t, k); })
      .def("s_value", [](const WeightFamily& f, double t, Index k) { return s_value(f, t, k); })
      .def_property_readonly("w_plus", &WeightFamily::w_plus)
      .def_property_readonly("w_minus", &WeightFamily::w_minus)
      .def_property_readonly("trace", &WeightFamily::trace)
      .def_property_readonly("is_disk", [](const WeightFamily& f) { return f.domain() == DomainKind::Disk; })
      .def_property_readonly("name", &WeightFamily::name)
      .def("__repr__", [](const WeightFamily& f) { return "<WeightFamily " + f.name() + ">"; });

  py::class_<IndexWindow>(m, "IndexWindow")
      .def_readonly("k_lo", &IndexWindow::k_lo)
      .def_readonly("k_hi", &IndexWindow::k_hi)
      .def_readonly("tail_tol", &IndexWindow::tail_tol)
      .def_readonly("tail_bound_hi", &IndexWindow::tail_bound_hi)
      .def_readonly("tail_bound_lo", &IndexWindow::tail_bound_lo)
      .def_property_readonly("size", &IndexWindow::size);

  m.def("truncation_window", &truncation_window, py::arg("family"), py::arg("t"), py::arg("tail_tol"),
        py::arg("k_cap") = Index{20'000'000});
  m.def("make_window", &make_window, py::arg("family"), py::arg("t"), py::arg("k_lo"), py::arg("k_hi"));

  m.def(
      "realize",
      [](const py::object& e, const WeightFamily& f, double t, const IndexWindow& w) {
        return bands_dict(realize_quantum<double>(to_element(e), f, t, w));
      },
      "Band realization {offset: values by column}.");
  m.def("quantum_norm", [](const py::object& e, const WeightFamily& f, double t, const IndexWindow& w) {
    return element_quantum_norm(to_element(e), f, t, w);
  });
  m.def("classical_norm", [](const py::object& e, const WeightFamily& f) {
    return classical_norm(to_element(e), f);
  });
  m.def(
      "apply_qt",
      [](const py::object& e, const WeightFamily& f, double t, const IndexWindow& w,
         const std::string& mode, bool brute) {
        return bands_dict(apply_Qt<double>(to_element(e), f, t, w, parse_mode(mode),
                                           brute ? QtPath::Brute : QtPath::Fast));
      },
      py::arg("element"), py::arg("family"), py::arg("t"), py::arg("window"),
      py::arg("mode") = "corrected", py::arg("brute") = false);
  m.def(
      "inverse_residual",
      [](const py::object& e, const WeightFamily& f, double t, double tail_tol, const std::string& mode,
         Index k_cap) {
        const auto r = inverse_residual(to_element(e), f, t, tail_tol, parse_mode(mode), k_cap);
        py::dict d;
        d["residual"] = r.residual;
        d["bound"] = r.bound;
        d["interior_lo"] = r.interior_lo;
        d["interior_hi"] = r.interior_hi;
        return d;
      },
      py::arg("element"), py::arg("family"), py::arg("t"), py::arg("tail_tol"),
      py::arg("mode") = "corrected", py::arg("k_cap") = Index{20'000'000});
  m.def(
      "norm_convergence",
      [](const py::object& e, const WeightFamily& f, const std::vector<double>& grid, double tail_tol,
         Index k_cap) { return series_list(norm_convergence(to_element(e), f, grid, tail_tol, k_cap)); },
      py::arg("element"), py::arg("family"), py::arg("t_grid"), py::arg("tail_tol"),
      py::arg("k_cap") = Index{20'000'000});
  m.def(
      "parametrix_convergence",
      [](const py::object& e, const WeightFamily& f, const std::vector<double>& grid, double tail_tol,
         const std::string& mode, Index k_cap) {
        return series_list(parametrix_convergence(to_element(e), f, grid, tail_tol, parse_mode(mode), k_cap));
      },
      py::arg("element"), py::arg("family"), py::arg("t_grid"), py::arg("tail_tol"),
      py::arg("mode") = "corrected", py::arg("k_cap") = Index{20'000'000});
  m.def(
      "kernel_norms",
      [](const std::string& kind, int n, double t, const WeightFamily& f, const IndexWindow& w,
         const std::string& mode) {
        KernelKind k = kind == "T1" ? KernelKind::T1 : kind == "T2" ? KernelKind::T2 : KernelKind::Zero;
        if (kind != "T1" && kind != "T2" && kind != "zero") throw ParameterError("kernel kind must be T1, T2 or zero");
        const KernelOperatorSpec spec{k, n, t, f, w};
        const auto b = schur_young_bound(spec, parse_mode(mode));
        const auto e = operator_norm_estimate(spec, parse_mode(mode));
        py::dict d;
        d["schur_bound"] = b.bound;
        d["analytic_cap"] = b.analytic_cap;
        d["power_estimate"] = e.value;
        d["converged"] = e.converged;
        return d;
      },
      py::arg("kind"), py::arg("n"), py::arg("t"), py::arg("family"), py::arg("window"),
      py::arg("mode") = "corrected");
  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& out_dir) {
        auto cfg = parse_config(config_json);
        cfg.out_dir = out_dir;
        const auto a = run_experiment(cfg);
        py::dict d;
        d["exit_code"] = a.exit_code;
        d["report_path"] = a.report_path;
        d["manifest_path"] = a.manifest_path;
        return d;
      },
      py::arg("config_json"), py::arg("out_dir"));
}
