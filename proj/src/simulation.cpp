#include "wovl/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wovl/error.hpp"

namespace wovl {

std::string_view to_string(MseConvention c) {
  return c == MseConvention::about_exact ? "about_exact" : "about_mean";
}

std::optional<MseConvention> parse_mse_convention(std::string_view s) {
  if (s == "about_exact") return MseConvention::about_exact;
  if (s == "about_mean") return MseConvention::about_mean;
  return std::nullopt;
}

void validate(const Scenario& s) {
  if (s.n1 < 2 || s.n2 < 2) throw DomainError("sample sizes must be >= 2");
  if (s.replications < 1) throw DomainError("replications must be >= 1");
  if (s.estimators.empty()) throw DomainError("estimator set must be nonempty");
  for (std::size_t i = 0; i < s.estimators.size(); ++i) {
    for (std::size_t j = i + 1; j < s.estimators.size(); ++j) {
      if (s.estimators[i] == s.estimators[j]) {
        throw DomainError("estimator listed twice: " + std::string(to_string(s.estimators[i])));
      }
    }
  }
  if (s.fit_mode == FitMode::not_applicable) {
    throw DomainError("scenario fit_mode must be unrestricted or equal_shape");
  }
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string scenario_id(const Scenario& s) {
  return "a1=" + shortest(s.pair.f1.scale()) + ";b1=" + shortest(s.pair.f1.shape()) +
         ";a2=" + shortest(s.pair.f2.scale()) + ";b2=" + shortest(s.pair.f2.shape()) +
         ";n1=" + std::to_string(s.n1) + ";n2=" + std::to_string(s.n2);
}

std::optional<ScenarioKey> parse_scenario_id(std::string_view id) {
  const char* names[6] = {"a1=", "b1=", "a2=", "b2=", "n1=", "n2="};
  double vals[6];
  std::string_view rest = id;
  for (int i = 0; i < 6; ++i) {
    const std::string_view name = names[i];
    if (rest.substr(0, name.size()) != name) return std::nullopt;
    rest.remove_prefix(name.size());
    const auto end = rest.find(';');
    const std::string_view field = rest.substr(0, end);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), vals[i]);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    if (i < 5) {
      if (end == std::string_view::npos) return std::nullopt;
      rest.remove_prefix(end + 1);
    } else if (end != std::string_view::npos) {
      return std::nullopt;
    }
  }
  return ScenarioKey{vals[0], vals[1], vals[2], vals[3], static_cast<std::size_t>(vals[4]),
                     static_cast<std::size_t>(vals[5])};
}

Metrics compute_metrics(std::span<const double> estimates, double exact,
                        MseConvention convention) {
  if (estimates.empty()) throw DomainError("no estimates to aggregate");
  if (!(exact > 0.0)) throw DomainError("exact value must be > 0");
  const double r = static_cast<double>(estimates.size());
  Metrics m;
  for (double e : estimates) m.mean += e;
  m.mean /= r;
  const double centre = convention == MseConvention::about_exact ? exact : m.mean;
  for (double e : estimates) m.mse += (e - centre) * (e - centre);
  m.mse /= r;
  m.rb = (m.mean - exact) / exact;
  m.rrmse = std::sqrt(m.mse) / exact;
  return m;
}

const Metrics* ScenarioReport::find(EstimatorMethod m) const {
  for (const auto& e : estimators) {
    if (e.method == m) return &e.metrics;
  }
  return nullptr;
}

std::vector<double> run_replication(const Scenario& scenario, std::uint64_t index) {
  RandomStream stream = derive_substream(scenario.seed, index);
  const Sample xs = sample(scenario.pair.f1, scenario.n1, stream);
  const Sample ys = sample(scenario.pair.f2, scenario.n2, stream);

  const bool needs_fit =
      std::any_of(scenario.estimators.begin(), scenario.estimators.end(),
                  [](EstimatorMethod m) { return m != EstimatorMethod::kernel; });

  std::vector<double> out;
  try {
    std::optional<WeibullParams> fit1, fit2;
    if (needs_fit) {
      if (scenario.fit_mode == FitMode::equal_shape) {
        const FitResult f = fit_mle_equal_shape(xs, ys);
        fit1 = f.params[0];
        fit2 = f.params[1];
      } else {
        fit1 = fit_mle(xs).params[0];
        fit2 = fit_mle(ys).params[0];
      }
    }
    out.reserve(scenario.estimators.size());
    for (EstimatorMethod m : scenario.estimators) {
      if (m == EstimatorMethod::kernel) {
        out.push_back(delta_kernel(xs, ys).value);
      } else {
        out.push_back(delta_parametric(m, *fit1, *fit2, xs, ys, scenario.fit_mode).value);
      }
    }
  } catch (const DegenerateSampleError&) {
    out.clear();
  } catch (const NonConvergenceError&) {
    out.clear();
  }
  return out;
}

ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& opts) {
  validate(scenario);
  ScenarioReport report;
  report.scenario = scenario;
  report.delta_exact = delta_exact(scenario.pair, opts.quadrature);

  const std::size_t reps = scenario.replications;
  std::vector<std::vector<double>> results(reps);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(reps)));
  if (workers == 1) {
    for (std::size_t j = 0; j < reps; ++j) results[j] = run_replication(scenario, j);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      try {
        for (std::size_t j = next++; j < reps; j = next++) {
          results[j] = run_replication(scenario, j);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  const std::size_t k = scenario.estimators.size();
  std::vector<std::vector<double>> columns(k);
  std::size_t failures = 0;
  for (const auto& row : results) {
    if (row.empty()) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) columns[i].push_back(row[i]);
  }
  if (static_cast<double>(failures) > opts.max_failure_fraction * static_cast<double>(reps) ||
      failures == reps) {
    throw ScenarioAbortError(scenario_id(scenario) + ": " + std::to_string(failures) + " of " +
                             std::to_string(reps) + " replications failed to fit");
  }

  for (std::size_t i = 0; i < k; ++i) {
    Metrics m = compute_metrics(columns[i], report.delta_exact, scenario.mse_convention);
    m.replicate_failures = failures;
    report.estimators.push_back({scenario.estimators[i], m});
  }

  if (const Metrics* kern = report.find(EstimatorMethod::kernel)) {
    const double kernel_mse = kern->mse;
    for (auto& e : report.estimators) {
      if (e.metrics.mse > 0.0) e.metrics.eff_vs_kernel = kernel_mse / e.metrics.mse;
    }
  }
  return report;
}

}  // namespace wovl
