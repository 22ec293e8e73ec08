#include "wovl/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wovl/error.hpp"

namespace wovl {

std::string_view to_string(EstimatorMethod m) {
  switch (m) {
    case EstimatorMethod::parametric_x: return "parametric_x";
    case EstimatorMethod::parametric_y: return "parametric_y";
    case EstimatorMethod::parametric_avg: return "parametric_avg";
    case EstimatorMethod::kernel: return "kernel";
  }
  return "?";
}

std::string_view to_string(FitMode m) {
  switch (m) {
    case FitMode::unrestricted: return "unrestricted";
    case FitMode::equal_shape: return "equal_shape";
    case FitMode::not_applicable: return "not_applicable";
  }
  return "?";
}

std::optional<EstimatorMethod> parse_estimator_method(std::string_view s) {
  for (auto m : {EstimatorMethod::parametric_x, EstimatorMethod::parametric_y,
                 EstimatorMethod::parametric_avg, EstimatorMethod::kernel}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::optional<FitMode> parse_fit_mode(std::string_view s) {
  if (s == "unrestricted") return FitMode::unrestricted;
  if (s == "equal_shape" || s == "equal-shape") return FitMode::equal_shape;
  if (s == "not_applicable") return FitMode::not_applicable;
  return std::nullopt;
}

KdeModel::KdeModel(std::vector<double> points, double bandwidth)
    : points_(std::move(points)), bandwidth_(bandwidth) {
  if (points_.empty()) throw DomainError("kernel model needs at least one point");
  if (!std::isfinite(bandwidth) || !(bandwidth > 0.0)) {
    throw DomainError("bandwidth must be finite and > 0");
  }
}

KdeModel::KdeModel(std::vector<double> points)
    : KdeModel(points, silverman_bandwidth(points)) {}

double silverman_bandwidth(std::span<const double> xs) {
  if (xs.size() < 2) throw DegenerateSampleError("bandwidth needs at least 2 points");
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw DegenerateSampleError("sample has zero spread; bandwidth undefined");
  return 1.06 * sd * std::pow(n, -0.2);
}

double silverman_bandwidth(const Sample& s) { return silverman_bandwidth(s.values()); }

double kde_pdf(const KdeModel& model, double x) {
  const double h = model.bandwidth();
  double sum = 0.0;
  for (double p : model.points()) {
    const double z = (x - p) / h;
    sum += std::exp(-0.5 * z * z);
  }
  return sum * std::numbers::inv_sqrtpi / (std::numbers::sqrt2 * h *
                                           static_cast<double>(model.points().size()));
}

namespace {

// Mean of min{1, other/own} over the points, each term in [0, 1].
template <typename OwnLogDensity, typename OtherLogDensity>
double mean_ratio(std::span<const double> pts, OwnLogDensity own, OtherLogDensity other) {
  double sum = 0.0;
  for (double x : pts) sum += std::min(1.0, std::exp(other(x) - own(x)));
  return sum / static_cast<double>(pts.size());
}

}  // namespace

DeltaEstimate delta_parametric(EstimatorMethod variant, const WeibullParams& fit1,
                               const WeibullParams& fit2, const Sample& sample_x,
                               const Sample& sample_y, FitMode fit_mode) {
  auto l1 = [&](double x) { return log_pdf(fit1, x); };
  auto l2 = [&](double x) { return log_pdf(fit2, x); };
  DeltaEstimate e;
  e.method = variant;
  e.fit_mode = fit_mode;
  switch (variant) {
    case EstimatorMethod::parametric_x:
      e.value = mean_ratio(sample_x.values(), l1, l2);
      break;
    case EstimatorMethod::parametric_y:
      e.value = mean_ratio(sample_y.values(), l2, l1);
      break;
    case EstimatorMethod::parametric_avg:
      e.value = 0.5 * (mean_ratio(sample_x.values(), l1, l2) +
                       mean_ratio(sample_y.values(), l2, l1));
      break;
    case EstimatorMethod::kernel:
      throw DomainError("delta_parametric does not implement the kernel method");
  }
  return e;
}

DeltaEstimate estimate_parametric(EstimatorMethod variant, const Sample& sample_x,
                                  const Sample& sample_y, FitMode fit_mode) {
  if (fit_mode == FitMode::equal_shape) {
    const FitResult fit = fit_mle_equal_shape(sample_x, sample_y);
    return delta_parametric(variant, fit.params[0], fit.params[1], sample_x, sample_y,
                            fit_mode);
  }
  const FitResult fx = fit_mle(sample_x);
  const FitResult fy = fit_mle(sample_y);
  return delta_parametric(variant, fx.params[0], fy.params[0], sample_x, sample_y,
                          FitMode::unrestricted);
}

DeltaEstimate delta_kernel(const Sample& sample_x, const Sample& sample_y) {
  const auto xs = sample_x.values();
  const auto ys = sample_y.values();
  const KdeModel k1(std::vector<double>(xs.begin(), xs.end()));
  const KdeModel k2(std::vector<double>(ys.begin(), ys.end()));

  auto ratio_mean = [](std::span<const double> pts, const KdeModel& own,
                       const KdeModel& other) {
    double sum = 0.0;
    for (double x : pts) {
      // own > 0 at its own data points (self term phi(0) / (n h)).
      sum += std::min(1.0, kde_pdf(other, x) / kde_pdf(own, x));
    }
    return sum / static_cast<double>(pts.size());
  };

  DeltaEstimate e;
  e.method = EstimatorMethod::kernel;
  e.fit_mode = FitMode::not_applicable;
  e.value = 0.5 * (ratio_mean(xs, k1, k2) + ratio_mean(ys, k2, k1));
  return e;
}

}  // namespace wovl
