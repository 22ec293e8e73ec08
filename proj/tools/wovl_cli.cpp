// wovl: command-line front end for Weibull overlap coefficients.
//
// Exit codes: 0 success, 2 input/usage, 3 divergent integral,
// 4 degenerate sample, 5 non-convergence, 6 scenario aborted, 1 other.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wovl/distributions.hpp"
#include "wovl/error.hpp"
#include "wovl/estimators.hpp"
#include "wovl/overlap.hpp"
#include "wovl/report.hpp"
#include "wovl/simulation.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kInput = 2,
  kDivergent = 3,
  kDegenerate = 4,
  kNonConvergence = 5,
  kAborted = 6,
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct ExactArgs {
  double scale1 = 0, shape1 = 0, scale2 = 0, shape2 = 0;
  std::vector<std::string> coefficients = {"delta", "rho", "lambda", "pianka", "kl"};
  double abs_tol = 1e-9, rel_tol = 1e-9, tail_mass = 1e-12;
};

int cmd_exact(const ExactArgs& a) {
  const wovl::DistributionPair pair{wovl::WeibullParams(a.scale1, a.shape1),
                                    wovl::WeibullParams(a.scale2, a.shape2)};
  const wovl::QuadratureSpec spec(a.abs_tol, a.rel_tol, a.tail_mass);
  std::vector<wovl::Coefficient> kinds;
  for (const auto& name : a.coefficients) {
    const auto c = wovl::parse_coefficient(name);
    if (!c) throw wovl::ParseError("unknown coefficient '" + name + "'");
    kinds.push_back(*c);
  }
  std::ostringstream out;
  for (auto c : kinds) {
    out << wovl::to_string(c) << ',' << wovl::format_fixed6(wovl::coefficient_exact(c, pair, spec))
        << '\n';
  }
  std::cout << out.str();
  return kOk;
}

struct FitArgs {
  std::vector<std::string> inputs;
  bool equal_shape = false;
};

int cmd_fit(const FitArgs& a) {
  if (a.inputs.empty() || a.inputs.size() > 2) {
    throw wovl::ParseError("fit takes one or two sample files");
  }
  std::vector<wovl::Sample> samples;
  for (const auto& p : a.inputs) samples.push_back(wovl::read_sample_csv(p));

  if (a.equal_shape) {
    if (samples.size() != 2) throw wovl::ParseError("--equal-shape needs two sample files");
    const auto r = wovl::fit_mle_equal_shape(samples[0], samples[1]);
    std::cout << "scale1,scale2,shape,log_likelihood,iterations,converged\n"
              << wovl::format_fixed6(r.params[0].scale()) << ','
              << wovl::format_fixed6(r.params[1].scale()) << ','
              << wovl::format_fixed6(r.params[0].shape()) << ','
              << wovl::format_fixed6(r.log_likelihood) << ',' << r.iterations << ','
              << bool_str(r.converged) << '\n';
    return kOk;
  }
  std::ostringstream out;
  out << "sample,scale,shape,log_likelihood,iterations,converged\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto r = wovl::fit_mle(samples[i]);
    out << (i + 1) << ',' << wovl::format_fixed6(r.params[0].scale()) << ','
        << wovl::format_fixed6(r.params[0].shape()) << ','
        << wovl::format_fixed6(r.log_likelihood) << ',' << r.iterations << ','
        << bool_str(r.converged) << '\n';
  }
  std::cout << out.str();
  return kOk;
}

struct EstimateArgs {
  std::vector<std::string> inputs;
  std::string method = "parametric";
  std::string variant = "avg";
  std::string fit_mode = "unrestricted";
};

int cmd_estimate(const EstimateArgs& a) {
  if (a.inputs.size() != 2) throw wovl::ParseError("estimate takes exactly two sample files");
  const auto x = wovl::read_sample_csv(a.inputs[0]);
  const auto y = wovl::read_sample_csv(a.inputs[1]);

  wovl::DeltaEstimate e;
  std::string variant = a.variant;
  if (a.method == "kernel") {
    e = wovl::delta_kernel(x, y);
    variant = "avg";
  } else {
    const auto m = wovl::parse_estimator_method("parametric_" + a.variant);
    const auto fm = wovl::parse_fit_mode(a.fit_mode);
    e = wovl::estimate_parametric(*m, x, y, *fm);
  }
  std::cout << a.method << ',' << variant << ',' << wovl::to_string(e.fit_mode) << ','
            << wovl::format_fixed6(e.value) << '\n';
  return kOk;
}

struct SimulateArgs {
  std::string config;
  unsigned workers = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto scenarios = wovl::read_scenario_config(a.config);
  wovl::RunOptions opts;
  opts.workers = a.workers;

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary);
    if (!file) throw wovl::ParseError("cannot open output '" + a.out + "'");
  }
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << wovl::kReportCsvHeader << '\n';
  for (const auto& s : scenarios) {
    try {
      const auto report = wovl::run_scenario(s, opts);
      const auto rows = wovl::report_rows(report);
      wovl::write_report_rows(out, rows);
      out.flush();
    } catch (const wovl::ScenarioAbortError& e) {
      out << "# aborted: " << wovl::scenario_id(s) << ": partial results\n";
      std::cerr << "wovl simulate: scenario aborted: " << e.what() << '\n';
      return kAborted;
    } catch (const wovl::AccuracyError& e) {
      out << "# aborted: " << wovl::scenario_id(s) << ": partial results\n";
      std::cerr << "wovl simulate: scenario aborted: " << e.what() << '\n';
      return kAborted;
    }
  }
  return kOk;
}

struct ReportArgs {
  std::string input;
  std::string format = "markdown";
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw wovl::ParseError("cannot open report '" + a.input + "'");
  const auto rows = wovl::parse_report_csv(in);
  const std::string md = wovl::render_markdown(rows);
  if (a.out.empty()) {
    std::cout << md;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw wovl::ParseError("cannot open output '" + a.out + "'");
    f << md;
  }
  return kOk;
}

struct SampleArgs {
  double scale = 0, shape = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a) {
  const wovl::WeibullParams p(a.scale, a.shape);
  wovl::RandomStream stream(a.seed);
  const auto s = wovl::sample(p, a.n, stream);
  std::ostringstream buf;
  buf << "x\n";
  for (double v : s.values()) {
    char tmp[64];
    const auto r = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf.write(tmp, r.ptr - tmp);
    buf << '\n';
  }
  if (a.out.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw wovl::ParseError("cannot open output '" + a.out + "'");
    f << buf.str();
  }
  return kOk;
}

unsigned default_workers() {
  if (const char* env = std::getenv("WOVL_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlap coefficients between two Weibull distributions"};
  app.require_subcommand(1);

  ExactArgs exact;
  auto* c_exact = app.add_subcommand("exact", "Exact overlap coefficients of two Weibull laws");
  c_exact->add_option("--scale1", exact.scale1)->required();
  c_exact->add_option("--shape1", exact.shape1)->required();
  c_exact->add_option("--scale2", exact.scale2)->required();
  c_exact->add_option("--shape2", exact.shape2)->required();
  c_exact->add_option("--coefficients", exact.coefficients,
                      "Subset of delta,rho,lambda,pianka,kl")
      ->delimiter(',')
      ->capture_default_str();
  c_exact->add_option("--abs-tol", exact.abs_tol)->capture_default_str();
  c_exact->add_option("--rel-tol", exact.rel_tol)->capture_default_str();
  c_exact->add_option("--tail-mass", exact.tail_mass)->capture_default_str();

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Maximum-likelihood Weibull fit of one or two samples");
  c_fit->add_option("inputs", fit.inputs, "Sample CSV file(s)")->required()->expected(1, 2);
  c_fit->add_flag("--equal-shape", fit.equal_shape, "Fit two samples with a common shape");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate the Weitzman coefficient from two samples");
  c_est->add_option("inputs", est.inputs, "Two sample CSV files")->required()->expected(2);
  c_est->add_option("--method", est.method)
      ->check(CLI::IsMember({"parametric", "kernel"}))
      ->capture_default_str();
  c_est->add_option("--variant", est.variant)
      ->check(CLI::IsMember({"x", "y", "avg"}))
      ->capture_default_str();
  c_est->add_option("--fit-mode", est.fit_mode)
      ->check(CLI::IsMember({"unrestricted", "equal-shape"}))
      ->capture_default_str();

  SimulateArgs sim;
  sim.workers = default_workers();
  auto* c_sim = app.add_subcommand("simulate", "Run a Monte Carlo scenario batch");
  c_sim->add_option("config", sim.config, "Scenario JSON config")->required();
  c_sim->add_option("--workers", sim.workers, "Worker threads (env WOVL_WORKERS)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sim->add_option("--out", sim.out, "Report CSV path (default stdout)");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Render a simulate CSV as Markdown tables");
  c_rep->add_option("input", rep.input, "Report CSV")->required();
  c_rep->add_option("--format", rep.format)->check(CLI::IsMember({"markdown"}))->capture_default_str();
  c_rep->add_option("--out", rep.out, "Output path (default stdout)");

  SampleArgs smp;
  auto* c_smp = app.add_subcommand("sample", "Draw a seeded Weibull sample as CSV");
  c_smp->add_option("--scale", smp.scale)->required();
  c_smp->add_option("--shape", smp.shape)->required();
  c_smp->add_option("-n,--size", smp.n)->required()->check(CLI::PositiveNumber);
  c_smp->add_option("--seed", smp.seed)->required();
  c_smp->add_option("--out", smp.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*c_exact) return cmd_exact(exact);
    if (*c_fit) return cmd_fit(fit);
    if (*c_est) return cmd_estimate(est);
    if (*c_sim) return cmd_simulate(sim);
    if (*c_rep) return cmd_report(rep);
    if (*c_smp) return cmd_sample(smp);
  } catch (const wovl::DivergentIntegralError& e) {
    std::cerr << "wovl: " << e.what() << '\n';
    return kDivergent;
  } catch (const wovl::DegenerateSampleError& e) {
    std::cerr << "wovl: " << e.what() << '\n';
    return kDegenerate;
  } catch (const wovl::NonConvergenceError& e) {
    std::cerr << "wovl: " << e.what() << " (last shape " << e.last_iterate() << ")\n";
    return kNonConvergence;
  } catch (const wovl::ParseError& e) {
    std::cerr << "wovl: " << e.what() << '\n';
    return kInput;
  } catch (const wovl::DomainError& e) {
    std::cerr << "wovl: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "wovl: " << e.what() << '\n';
    return kOther;
  }
  return kInput;
}
