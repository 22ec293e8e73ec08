#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wovl/random.hpp"

namespace wovl {

// Two-parameter Weibull law W(scale, shape) on x > 0.
class WeibullParams {
 public:
  // Throws DomainError unless both values are finite and strictly positive.
  WeibullParams(double scale, double shape);

  double scale() const noexcept { return scale_; }
  double shape() const noexcept { return shape_; }

  friend bool operator==(const WeibullParams&, const WeibullParams&) = default;

 private:
  double scale_;
  double shape_;
};

// Observations from one population. Nonempty, every value finite and > 0.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // Multiplies every observation by c > 0.
  Sample scaled(double c) const;

 private:
  std::vector<double> values_;
};

// Maximum-likelihood fit. `params` holds one entry for a single-sample fit and
// two entries (sharing one shape) for the equal-shape fit.
struct FitResult {
  std::vector<WeibullParams> params;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  // Value of the shape score equation at the returned shape.
  double score_residual = 0.0;
};

double pdf(const WeibullParams& p, double x);
// Natural log of the density, evaluated analytically (finite for every x > 0
// even where pdf() underflows).
double log_pdf(const WeibullParams& p, double x);
double cdf(const WeibullParams& p, double x);
// Upper tail 1 - cdf, accurate where cdf rounds to 1.
double survival(const WeibullParams& p, double x);
double quantile(const WeibullParams& p, double prob);
double mean(const WeibullParams& p);

// n variates by inverse transform x = scale * (-ln U)^(1/shape).
Sample sample(const WeibullParams& p, std::size_t n, RandomStream& stream);

double log_likelihood(const WeibullParams& p, std::span<const double> xs);

// Single-sample MLE. The shape solves the profile score
//   g(b) = n/b + sum ln x - n * sum(x^b ln x) / sum(x^b) = 0
// and scale = (mean of x^b)^(1/b).
// Throws DegenerateSampleError for n < 2 or all-equal data, and
// NonConvergenceError if the iteration cap is hit.
FitResult fit_mle(const Sample& s);

// Two samples with a common shape: the shape solves the pooled profile score,
// each scale is computed from its own sample with that shape.
FitResult fit_mle_equal_shape(const Sample& x, const Sample& y);

// Reads one observation per line, optionally preceded by a single
// non-numeric header line. Blank lines are skipped. Any other non-numeric
// or non-positive row throws ParseError carrying the 1-based line number.
Sample parse_sample_csv(std::istream& in);
Sample read_sample_csv(const std::string& path);

}  // namespace wovl
