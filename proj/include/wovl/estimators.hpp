#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wovl/distributions.hpp"

namespace wovl {

enum class EstimatorMethod { parametric_x, parametric_y, parametric_avg, kernel };
enum class FitMode { unrestricted, equal_shape, not_applicable };

std::string_view to_string(EstimatorMethod m);
std::string_view to_string(FitMode m);
std::optional<EstimatorMethod> parse_estimator_method(std::string_view s);
std::optional<FitMode> parse_fit_mode(std::string_view s);

struct DeltaEstimate {
  double value = 0.0;
  EstimatorMethod method = EstimatorMethod::parametric_avg;
  FitMode fit_mode = FitMode::unrestricted;
};

// Gaussian kernel density estimate. `points` may be any finite reals.
class KdeModel {
 public:
  // Throws DomainError for an empty point set or a non-positive bandwidth.
  KdeModel(std::vector<double> points, double bandwidth);

  // Convenience: bandwidth from silverman_bandwidth(points).
  explicit KdeModel(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  double bandwidth() const noexcept { return bandwidth_; }

 private:
  std::vector<double> points_;
  double bandwidth_;
};

// 1.06 * S * n^(-1/5), S the sample standard deviation (divisor n - 1).
// Throws DegenerateSampleError for n < 2 or zero spread.
double silverman_bandwidth(std::span<const double> xs);
double silverman_bandwidth(const Sample& s);

// (1 / (n h)) * sum phi((x - p_i) / h).
double kde_pdf(const KdeModel& model, double x);

// Moment-form estimators built on the identities
//   E[min{f1, f2}(X) / f1(X)] = E[min{f1, f2}(Y) / f2(Y)] = Delta
// with fitted densities plugged in:
//   x:   mean over sample_x of min{f1, f2} / f1
//   y:   mean over sample_y of min{f1, f2} / f2
//   avg: (x + y) / 2
// `fit_mode` only tags the result.
DeltaEstimate delta_parametric(EstimatorMethod variant, const WeibullParams& fit1,
                               const WeibullParams& fit2, const Sample& sample_x,
                               const Sample& sample_y,
                               FitMode fit_mode = FitMode::unrestricted);

// Fits per `fit_mode` and then calls delta_parametric().
DeltaEstimate estimate_parametric(EstimatorMethod variant, const Sample& sample_x,
                                  const Sample& sample_y,
                                  FitMode fit_mode = FitMode::unrestricted);

// Kernel competitor: the averaged moment form with a Silverman-bandwidth
// Gaussian KDE of each sample in place of the fitted Weibull densities.
DeltaEstimate delta_kernel(const Sample& sample_x, const Sample& sample_y);

}  // namespace wovl
