#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wovl/distributions.hpp"
#include "wovl/error.hpp"
#include "wovl/estimators.hpp"
#include "wovl/overlap.hpp"
#include "wovl/report.hpp"
#include "wovl/simulation.hpp"

namespace py = pybind11;

namespace {

wovl::Sample to_sample(const std::vector<double>& v) { return wovl::Sample(v); }

template <typename T, typename Parse>
T parse_or_throw(const std::string& s, Parse parse, const char* what) {
  const auto r = parse(s);
  if (!r) throw wovl::DomainError(std::string("unknown ") + what + " '" + s + "'");
  return *r;
}

py::dict metrics_dict(const wovl::Metrics& m) {
  py::dict d;
  d["mean"] = m.mean;
  d["mse"] = m.mse;
  d["rb"] = m.rb;
  d["rrmse"] = m.rrmse;
  d["eff_vs_kernel"] = m.eff_vs_kernel ? py::cast(*m.eff_vs_kernel) : py::none();
  d["replicate_failures"] = m.replicate_failures;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Overlap coefficients between two Weibull distributions";

  auto base = py::register_exception<wovl::Error>(m, "WovlError", PyExc_RuntimeError);
  py::register_exception<wovl::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<wovl::DegenerateSampleError>(m, "DegenerateSampleError", base.ptr());
  py::register_exception<wovl::NonConvergenceError>(m, "NonConvergenceError", base.ptr());
  py::register_exception<wovl::AccuracyError>(m, "AccuracyError", base.ptr());
  py::register_exception<wovl::DivergentIntegralError>(m, "DivergentIntegralError", base.ptr());
  py::register_exception<wovl::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<wovl::ScenarioAbortError>(m, "ScenarioAbortError", base.ptr());

  py::class_<wovl::WeibullParams>(m, "WeibullParams")
      .def(py::init<double, double>(), py::arg("scale"), py::arg("shape"))
      .def_property_readonly("scale", &wovl::WeibullParams::scale)
      .def_property_readonly("shape", &wovl::WeibullParams::shape)
      .def("__eq__", [](const wovl::WeibullParams& a, const wovl::WeibullParams& b) { return a == b; })
      .def("__repr__", [](const wovl::WeibullParams& p) {
        std::ostringstream s;
        s << "WeibullParams(scale=" << p.scale() << ", shape=" << p.shape() << ")";
        return s.str();
      });

  m.def("pdf", &wovl::pdf, py::arg("params"), py::arg("x"));
  m.def("log_pdf", &wovl::log_pdf, py::arg("params"), py::arg("x"));
  m.def("cdf", &wovl::cdf, py::arg("params"), py::arg("x"));
  m.def("quantile", &wovl::quantile, py::arg("params"), py::arg("p"));
  m.def("mean", &wovl::mean, py::arg("params"));
  m.def(
      "sample",
      [](const wovl::WeibullParams& p, std::size_t n, std::uint64_t seed) {
        wovl::RandomStream stream(seed);
        const auto s = wovl::sample(p, n, stream);
        return std::vector<double>(s.values().begin(), s.values().end());
      },
      py::arg("params"), py::arg("n"), py::arg("seed"),
      "Seeded inverse-transform sample; same seed gives the same draws.");

  py::class_<wovl::FitResult>(m, "FitResult")
      .def_readonly("params", &wovl::FitResult::params)
      .def_readonly("log_likelihood", &wovl::FitResult::log_likelihood)
      .def_readonly("iterations", &wovl::FitResult::iterations)
      .def_readonly("converged", &wovl::FitResult::converged)
      .def_readonly("score_residual", &wovl::FitResult::score_residual);

  m.def(
      "fit_mle", [](const std::vector<double>& x) { return wovl::fit_mle(to_sample(x)); },
      py::arg("sample"));
  m.def(
      "fit_mle_equal_shape",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return wovl::fit_mle_equal_shape(to_sample(x), to_sample(y));
      },
      py::arg("sample_x"), py::arg("sample_y"));

  auto make_pair = [](const wovl::WeibullParams& a, const wovl::WeibullParams& b) {
    return wovl::DistributionPair{a, b};
  };
  auto make_spec = [](double abs_tol, double rel_tol, double tail_mass) {
    return wovl::QuadratureSpec(abs_tol, rel_tol, tail_mass);
  };

  m.def(
      "crossings",
      [=](const wovl::WeibullParams& f1, const wovl::WeibullParams& f2, double tail_mass) {
        return wovl::crossings(make_pair(f1, f2), make_spec(1e-9, 1e-9, tail_mass));
      },
      py::arg("f1"), py::arg("f2"), py::arg("tail_mass") = 1e-12);
  m.def(
      "delta_exact",
      [=](const wovl::WeibullParams& f1, const wovl::WeibullParams& f2, double abs_tol,
          double rel_tol, double tail_mass) {
        return wovl::delta_exact(make_pair(f1, f2), make_spec(abs_tol, rel_tol, tail_mass));
      },
      py::arg("f1"), py::arg("f2"), py::arg("abs_tol") = 1e-9, py::arg("rel_tol") = 1e-9,
      py::arg("tail_mass") = 1e-12);
  m.def(
      "coefficient_exact",
      [=](const std::string& kind, const wovl::WeibullParams& f1, const wovl::WeibullParams& f2,
          double abs_tol, double rel_tol, double tail_mass) {
        const auto c = parse_or_throw<wovl::Coefficient>(
            kind, [](const std::string& s) { return wovl::parse_coefficient(s); }, "coefficient");
        return wovl::coefficient_exact(c, make_pair(f1, f2), make_spec(abs_tol, rel_tol, tail_mass));
      },
      py::arg("kind"), py::arg("f1"), py::arg("f2"), py::arg("abs_tol") = 1e-9,
      py::arg("rel_tol") = 1e-9, py::arg("tail_mass") = 1e-12);
  m.def(
      "ovl_values",
      [=](const wovl::WeibullParams& f1, const wovl::WeibullParams& f2) {
        const auto v = wovl::ovl_values(make_pair(f1, f2));
        py::dict d;
        d["delta"] = v.delta;
        d["rho"] = v.rho;
        d["lambda"] = v.lambda;
        d["pianka"] = v.pianka;
        d["kl"] = v.kl;
        return d;
      },
      py::arg("f1"), py::arg("f2"));

  m.def(
      "silverman_bandwidth",
      [](const std::vector<double>& x) { return wovl::silverman_bandwidth(x); }, py::arg("sample"));
  m.def(
      "kde_pdf",
      [](const std::vector<double>& points, double bandwidth, double x) {
        return wovl::kde_pdf(wovl::KdeModel(points, bandwidth), x);
      },
      py::arg("points"), py::arg("bandwidth"), py::arg("x"));

  py::class_<wovl::DeltaEstimate>(m, "DeltaEstimate")
      .def_readonly("value", &wovl::DeltaEstimate::value)
      .def_property_readonly("method",
                             [](const wovl::DeltaEstimate& e) { return std::string(wovl::to_string(e.method)); })
      .def_property_readonly("fit_mode", [](const wovl::DeltaEstimate& e) {
        return std::string(wovl::to_string(e.fit_mode));
      });

  auto parse_variant = [](const std::string& v) {
    return parse_or_throw<wovl::EstimatorMethod>(
        "parametric_" + v, [](const std::string& s) { return wovl::parse_estimator_method(s); },
        "variant");
  };
  auto parse_mode = [](const std::string& s) {
    return parse_or_throw<wovl::FitMode>(
        s, [](const std::string& t) { return wovl::parse_fit_mode(t); }, "fit mode");
  };

  m.def(
      "delta_parametric",
      [=](const std::string& variant, const wovl::WeibullParams& fit1,
          const wovl::WeibullParams& fit2, const std::vector<double>& x,
          const std::vector<double>& y) {
        return wovl::delta_parametric(parse_variant(variant), fit1, fit2, to_sample(x), to_sample(y));
      },
      py::arg("variant"), py::arg("fit1"), py::arg("fit2"), py::arg("sample_x"),
      py::arg("sample_y"));
  m.def(
      "estimate_parametric",
      [=](const std::vector<double>& x, const std::vector<double>& y, const std::string& variant,
          const std::string& fit_mode) {
        return wovl::estimate_parametric(parse_variant(variant), to_sample(x), to_sample(y),
                                         parse_mode(fit_mode));
      },
      py::arg("sample_x"), py::arg("sample_y"), py::arg("variant") = "avg",
      py::arg("fit_mode") = "unrestricted");
  m.def(
      "delta_kernel",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return wovl::delta_kernel(to_sample(x), to_sample(y));
      },
      py::arg("sample_x"), py::arg("sample_y"));

  m.def(
      "compute_metrics",
      [](const std::vector<double>& estimates, double exact, const std::string& convention) {
        const auto c = parse_or_throw<wovl::MseConvention>(
            convention, [](const std::string& s) { return wovl::parse_mse_convention(s); },
            "mse convention");
        return metrics_dict(wovl::compute_metrics(estimates, exact, c));
      },
      py::arg("estimates"), py::arg("exact"), py::arg("mse_convention") = "about_exact");

  m.def(
      "simulate",
      [](const std::string& config_json, unsigned workers) {
        const auto scenarios = wovl::parse_scenario_config(config_json);
        wovl::RunOptions opts;
        opts.workers = workers;
        std::vector<wovl::ScenarioReport> reports;
        {
          py::gil_scoped_release release;
          for (const auto& s : scenarios) reports.push_back(wovl::run_scenario(s, opts));
        }
        std::ostringstream out;
        wovl::write_report_csv(out, reports);
        return out.str();
      },
      py::arg("config_json"), py::arg("workers") = 1,
      "Runs a scenario batch (JSON text) and returns the report CSV text.");

  m.def(
      "run_scenario",
      [=](const wovl::WeibullParams& f1, const wovl::WeibullParams& f2, std::size_t n1,
          std::size_t n2, std::size_t replications, std::uint64_t seed,
          const std::vector<std::string>& estimators, const std::string& fit_mode,
          const std::string& mse_convention, unsigned workers) {
        wovl::Scenario s;
        s.pair = {f1, f2};
        s.n1 = n1;
        s.n2 = n2;
        s.replications = replications;
        s.seed = seed;
        for (const auto& e : estimators) {
          s.estimators.push_back(parse_or_throw<wovl::EstimatorMethod>(
              e, [](const std::string& t) { return wovl::parse_estimator_method(t); },
              "estimator"));
        }
        s.fit_mode = parse_mode(fit_mode);
        s.mse_convention = parse_or_throw<wovl::MseConvention>(
            mse_convention, [](const std::string& t) { return wovl::parse_mse_convention(t); },
            "mse convention");
        wovl::RunOptions opts;
        opts.workers = workers;
        wovl::ScenarioReport r = [&] {
          py::gil_scoped_release release;
          return wovl::run_scenario(s, opts);
        }();
        py::dict d;
        d["scenario_id"] = wovl::scenario_id(s);
        d["delta_exact"] = r.delta_exact;
        py::dict per;
        for (const auto& e : r.estimators) per[py::str(std::string(wovl::to_string(e.method)))] = metrics_dict(e.metrics);
        d["estimators"] = per;
        return d;
      },
      py::arg("f1"), py::arg("f2"), py::arg("n1"), py::arg("n2"), py::arg("replications") = 1000,
      py::arg("seed") = 1,
      py::arg("estimators") = std::vector<std::string>{"parametric_avg", "kernel"},
      py::arg("fit_mode") = "unrestricted", py::arg("mse_convention") = "about_exact",
      py::arg("workers") = 1);

  m.def(
      "render_markdown",
      [](const std::string& csv_text) {
        std::istringstream in(csv_text);
        const auto rows = wovl::parse_report_csv(in);
        return wovl::render_markdown(rows);
      },
      py::arg("report_csv"));

#ifdef WOVL_VERSION
  m.attr("__version__") = WOVL_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
