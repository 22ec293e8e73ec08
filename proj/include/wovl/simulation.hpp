#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wovl/estimators.hpp"
#include "wovl/overlap.hpp"
#include "wovl/random.hpp"

namespace wovl {

// about_exact: mse = mean (estimate - exact)^2, the usual mean squared error.
// about_mean:  mse = mean (estimate - mean estimate)^2, i.e. the variance.
enum class MseConvention { about_exact, about_mean };

std::string_view to_string(MseConvention c);
std::optional<MseConvention> parse_mse_convention(std::string_view s);

struct Scenario {
  DistributionPair pair{WeibullParams(1.0, 1.0), WeibullParams(1.0, 1.0)};
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  std::vector<EstimatorMethod> estimators;
  FitMode fit_mode = FitMode::unrestricted;
  MseConvention mse_convention = MseConvention::about_exact;
};

// Throws DomainError on sizes < 2, zero replications, an empty or duplicated
// estimator set, or fit_mode not_applicable.
void validate(const Scenario& s);

// Stable identifier encoding the pair and sample sizes, e.g.
// "a1=1;b1=3;a2=1;b2=4;n1=20;n2=30". Doubles use shortest round-trip form.
std::string scenario_id(const Scenario& s);

struct ScenarioKey {
  double scale1, shape1, scale2, shape2;
  std::size_t n1, n2;
};
std::optional<ScenarioKey> parse_scenario_id(std::string_view id);

struct Metrics {
  double mean = 0.0;
  double mse = 0.0;
  double rb = 0.0;
  double rrmse = 0.0;
  // mse(kernel) / mse(this estimator); present only when the kernel ran.
  std::optional<double> eff_vs_kernel;
  std::size_t replicate_failures = 0;
};

// RB = (mean - exact) / exact, RRMSE = sqrt(mse) / exact.
// Throws DomainError for an empty list or exact <= 0.
Metrics compute_metrics(std::span<const double> estimates, double exact,
                        MseConvention convention = MseConvention::about_exact);

struct EstimatorMetrics {
  EstimatorMethod method;
  Metrics metrics;
};

struct ScenarioReport {
  Scenario scenario;
  double delta_exact = 0.0;
  std::vector<EstimatorMetrics> estimators;

  const Metrics* find(EstimatorMethod m) const;
};

struct RunOptions {
  unsigned workers = 1;
  QuadratureSpec quadrature{};
  // Abort when more than this fraction of replications fail to fit.
  double max_failure_fraction = 0.05;
};

// Replication j draws sample_x then sample_y from derive_substream(seed, j),
// fits per fit_mode and evaluates every requested estimator. Replications whose
// fit fails are counted and dropped from every estimator's aggregate. Results
// are aggregated in replication order, so the report does not depend on
// `workers`.
ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& opts = {});

// Per-replication estimates, in the scenario's estimator order. Empty when the
// replication's fit failed.
std::vector<double> run_replication(const Scenario& scenario, std::uint64_t index);

}  // namespace wovl
