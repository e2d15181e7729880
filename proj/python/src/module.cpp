#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "bundlecurv/bundle.hpp"
#include "bundlecurv/classify.hpp"
#include "bundlecurv/cli.hpp"
#include "bundlecurv/error.hpp"
#include "bundlecurv/profile.hpp"
#include "bundlecurv/surface.hpp"

namespace py = pybind11;
namespace bc = bundlecurv;

namespace {

using ProfilePtr = std::shared_ptr<bc::profile::Profile>;

std::vector<double> column(const bc::profile::Profile& p, double bc::profile::Sample::*f) {
  std::vector<double> out;
  out.reserve(p.grid().size());
  for (const auto& s : p.grid()) out.push_back(s.*f);
  return out;
}

py::object rational(const bc::poly::Rational& q) {
  return py::module_::import("fractions")
      .attr("Fraction")(q.numerator(), q.denominator());
}

py::dict flatness(const ProfilePtr& p, double c, int samples) {
  const auto m = bc::bundle::build_example(p, c);
  const auto fr = bc::surface::flatness_residual(m.base(), m.curvature(), samples);
  const auto dr = bc::surface::dnabla_s_frame_residual(m.base(), m.curvature(), samples);
  py::dict d;
  d["alpha_estimate"] = fr.alpha_estimate;
  d["hess_residual"] = fr.hess_residual;
  d["constraint_residual"] = fr.constraint_residual;
  d["trace_residual"] = fr.trace_residual;
  d["dnabla_s"] = dr.sup_norms;
  d["window"] = py::make_tuple(fr.window.lo, fr.window.hi);
  d["curvature_function_residual"] = bc::bundle::curvature_function_check(m);
  return d;
}

py::dict catalog(int genus, int degree) {
  const auto rec = bc::classify::catalog(genus, degree);
  py::dict d;
  d["genus"] = rec.genus;
  d["degree"] = rec.degree;
  d["H"] = rational(rec.H);
  d["K"] = rational(rec.K);
  d["space_kind"] = rec.space_label();
  d["space_curvature"] =
      rec.space_curvature ? rational(*rec.space_curvature) : py::object(py::none());
  d["moduli_dim"] = rec.moduli_dim;
  return d;
}

py::dict nonexistence(std::pair<double, double> A, std::pair<double, double> B,
                      std::pair<double, double> alpha, std::pair<double, double> c,
                      double min_gap, int grid_n) {
  bc::classify::ParameterBox box;
  box.A = {A.first, A.second};
  box.B = {B.first, B.second};
  box.alpha = {alpha.first, alpha.second};
  box.c = {c.first, c.second};
  box.min_gap = min_gap;
  const auto cert = bc::classify::nonexistence_certificate(box, grid_n);
  py::list trace;
  for (const auto& s : cert.elimination_trace) {
    py::dict step;
    step["identity"] = s.claim;
    step["consequence"] = s.consequence;
    step["exact"] = s.exact;
    step["numeric_error"] = s.numeric_error;
    trace.append(step);
  }
  py::dict d;
  d["elimination_trace"] = trace;
  d["final_constraint"] = cert.final_constraint;
  d["trace_complete"] = cert.trace_complete;
  d["grid_min_residual"] = cert.grid_min_residual;
  d["points_scanned"] = cert.points_scanned;
  d["argmin"] = cert.argmin;
  d["conclusion"] = cert.conclusion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curvature of S^1-invariant metrics on circle bundles over surfaces";

  static const py::handle error_type =
      py::exception<bc::Error>(m, "BundlecurvError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const bc::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(bc::error_code(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<bc::profile::Profile, ProfilePtr>(m, "Profile")
      .def_property_readonly("alpha", &bc::profile::Profile::alpha)
      .def_property_readonly("conserved_constant", &bc::profile::Profile::conserved_constant)
      .def_property_readonly("r", [](const bc::profile::Profile& p) {
        return column(p, &bc::profile::Sample::r);
      })
      .def_property_readonly("H", [](const bc::profile::Profile& p) {
        return column(p, &bc::profile::Sample::H);
      })
      .def_property_readonly("Hp", [](const bc::profile::Profile& p) {
        return column(p, &bc::profile::Sample::Hp);
      })
      .def("at", [](const bc::profile::Profile& p, double r) {
        const auto j = p.at(r);
        return py::make_tuple(j.value, j.d1, j.d2);
      }, py::arg("r"), "(H, H', H'') at r by Hermite interpolation")
      .def("__len__", [](const bc::profile::Profile& p) { return p.grid().size(); });

  m.def("integrate",
        [](double alpha, double a, double r_max, double step, double tolerance) {
          bc::profile::IntegrateOptions opt;
          opt.conservation_tolerance = tolerance;
          py::gil_scoped_release release;
          return std::make_shared<bc::profile::Profile>(
              bc::profile::integrate({alpha, a, r_max, step}, opt));
        },
        py::arg("alpha"), py::arg("a"), py::arg("r_max"), py::arg("step") = 1e-3,
        py::arg("tolerance") = 1e-8);
  m.def("conservation_residual", &bc::profile::conservation_residual, py::arg("profile"));
  m.def("first_derivative_zero", &bc::profile::first_derivative_zero, py::arg("profile"),
        py::arg("after_r") = 0.0);
  m.def("warp_from_profile",
        [](const bc::profile::Profile& p, double c) {
          const auto w = bc::profile::warp_from_profile(p, c);
          std::vector<double> r;
          for (std::size_t i = 0; i < w.samples.size(); ++i) r.push_back(w.samples.node_r(i));
          return py::make_tuple(r, w.values());
        },
        py::arg("profile"), py::arg("c"), "(r, l) with l = c H' on the full grid");
  m.def("flatness", &flatness, py::arg("profile"), py::arg("c"), py::arg("samples") = 400,
        "conformal-flatness residuals of the example metric on the first window with c H' > 0");
  m.def("schouten_frame",
        [](double H, double K, double Hp) {
          const auto s = bc::bundle::schouten_frame(H, K, Hp);
          return py::make_tuple(s.s_tt, s.s_tx, s.s_hor);
        },
        py::arg("H"), py::arg("K"), py::arg("Hp"));
  m.def("horizontal_sectional_curvature", &bc::bundle::horizontal_sectional_curvature,
        py::arg("H"), py::arg("alpha"));
  m.def("catalog", &catalog, py::arg("genus"), py::arg("degree"));
  m.def("nonexistence_certificate", &nonexistence,
        py::arg("A") = std::pair{-5.0, 5.0}, py::arg("B") = std::pair{-5.0, 5.0},
        py::arg("alpha") = std::pair{-25.0, 25.0}, py::arg("c") = std::pair{0.1, 10.0},
        py::arg("min_gap") = 0.1, py::arg("grid_n") = 50,
        py::call_guard<py::gil_scoped_release>());
  m.def("holonomy_values",
        [](int genus, std::vector<double> coeffs) {
          return bc::classify::flat_holonomy(genus, std::move(coeffs)).values();
        },
        py::arg("genus"), py::arg("coefficients"));
  m.def("lattice_reduce",
        [](int genus, std::vector<double> coeffs) {
          return bc::classify::lattice_reduce(
                     bc::classify::flat_holonomy(genus, std::move(coeffs)))
              .coefficients;
        },
        py::arg("genus"), py::arg("coefficients"));
  m.def("render",
        [](const std::string& subcommand, std::map<std::string, std::string> params,
           std::optional<std::string> format) {
          bc::cli::RunConfig cfg;
          cfg.subcommand = subcommand;
          cfg.params = std::move(params);
          if (format) {
            if (*format == "csv") cfg.format = bc::cli::Format::Csv;
            else if (*format == "json") cfg.format = bc::cli::Format::Json;
            else throw bc::Error(bc::ErrorKind::Parameter, "format must be csv or json");
          }
          py::gil_scoped_release release;
          return bc::cli::render(cfg);
        },
        py::arg("subcommand"), py::arg("params") = std::map<std::string, std::string>{},
        py::arg("format") = py::none(),
        "artifact text of a CLI subcommand, without writing a file");
}
