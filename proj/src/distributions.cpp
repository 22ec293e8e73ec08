#include "wovl/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <numbers>
#include <sstream>

#include "wovl/error.hpp"

namespace wovl {

WeibullParams::WeibullParams(double scale, double shape)
    : scale_(scale), shape_(shape) {
  if (!std::isfinite(scale) || !(scale > 0.0)) {
    throw DomainError("Weibull scale must be finite and > 0");
  }
  if (!std::isfinite(shape) || !(shape > 0.0)) {
    throw DomainError("Weibull shape must be finite and > 0");
  }
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("sample must be nonempty");
  for (double v : values_) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw DomainError("sample values must be finite and > 0");
    }
  }
}

Sample Sample::scaled(double c) const {
  std::vector<double> out(values_.begin(), values_.end());
  for (double& v : out) v *= c;
  return Sample(std::move(out));
}

namespace {

void require_positive(double x) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw DomainError("density argument must be > 0");
  }
}

}  // namespace

double log_pdf(const WeibullParams& p, double x) {
  require_positive(x);
  const double a = p.scale();
  const double b = p.shape();
  const double lz = std::log(x) - std::log(a);
  return std::log(b) - std::log(a) + (b - 1.0) * lz - std::exp(b * lz);
}

double pdf(const WeibullParams& p, double x) { return std::exp(log_pdf(p, x)); }

double cdf(const WeibullParams& p, double x) {
  require_positive(x);
  return -std::expm1(-std::pow(x / p.scale(), p.shape()));
}

double survival(const WeibullParams& p, double x) {
  require_positive(x);
  return std::exp(-std::pow(x / p.scale(), p.shape()));
}

double quantile(const WeibullParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("quantile probability must lie in (0, 1)");
  }
  return p.scale() * std::pow(-std::log1p(-prob), 1.0 / p.shape());
}

double mean(const WeibullParams& p) {
  return p.scale() * std::tgamma(1.0 + 1.0 / p.shape());
}

Sample sample(const WeibullParams& p, std::size_t n, RandomStream& stream) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  std::vector<double> xs(n);
  const double inv_shape = 1.0 / p.shape();
  for (double& x : xs) {
    x = p.scale() * std::pow(-std::log(stream.uniform_open()), inv_shape);
  }
  return Sample(std::move(xs));
}

double log_likelihood(const WeibullParams& p, std::span<const double> xs) {
  double ll = 0.0;
  for (double x : xs) ll += log_pdf(p, x);
  return ll;
}

namespace {

constexpr double kScoreTolerance = 1e-10;
constexpr double kConvergedTolerance = 1e-8;
constexpr int kMaxIterations = 100;

// Log-observations shifted by the log of the largest observation, so every
// weight exp(b * l) lies in (0, 1] and never overflows.
struct LogData {
  std::vector<double> shifted;
  double log_max = 0.0;
  double sum_shifted = 0.0;
  double initial_shape = 0.0;
};

LogData prepare(const Sample& s) {
  if (s.size() < 2) {
    throw DegenerateSampleError("fitting requires at least 2 observations");
  }
  const auto xs = s.values();
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  if (*mn == *mx) {
    throw DegenerateSampleError("all observations are equal; the MLE does not exist");
  }

  LogData d;
  d.log_max = std::log(*mx);
  d.shifted.reserve(xs.size());
  for (double x : xs) d.shifted.push_back(std::log(x) - d.log_max);
  for (double l : d.shifted) d.sum_shifted += l;

  const double n = static_cast<double>(xs.size());
  const double m = d.sum_shifted / n;
  double ss = 0.0;
  for (double l : d.shifted) ss += (l - m) * (l - m);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) {
    throw DegenerateSampleError("observations have zero log-spread");
  }
  // Moment estimator: Var(ln X) = pi^2 / (6 b^2).
  d.initial_shape = std::numbers::pi / (std::sqrt(6.0) * sd);
  return d;
}

struct Weighted {
  double sum_w = 0.0;
  double mean_l = 0.0;
  double var_l = 0.0;
};

Weighted weighted_moments(const LogData& d, double shape) {
  Weighted w;
  double s1 = 0.0;
  for (double l : d.shifted) {
    const double e = std::exp(shape * l);
    w.sum_w += e;
    s1 += e * l;
  }
  w.mean_l = s1 / w.sum_w;
  double s2 = 0.0;
  for (double l : d.shifted) {
    const double dl = l - w.mean_l;
    s2 += std::exp(shape * l) * dl * dl;
  }
  w.var_l = s2 / w.sum_w;
  return w;
}

struct Score {
  double value;
  double slope;
};

// Pooled profile score over one or more samples; one sample gives g(b).
Score pooled_score(std::span<const LogData> parts, double shape) {
  Score sc{0.0, 0.0};
  for (const LogData& d : parts) {
    const double n = static_cast<double>(d.shifted.size());
    const Weighted w = weighted_moments(d, shape);
    sc.value += n / shape + d.sum_shifted - n * w.mean_l;
    sc.slope += -n / (shape * shape) - n * w.var_l;
  }
  return sc;
}

struct ShapeRoot {
  double shape;
  double residual;
  int iterations;
};

// The score is strictly decreasing in the shape, positive near 0 and negative
// for large shapes, so a sign bracket always exists. Newton steps that leave
// the bracket (or stall) fall back to bisection.
ShapeRoot solve_shape(std::span<const LogData> parts, double start) {
  double lo = start;
  double hi = start;
  Score s_lo = pooled_score(parts, lo);
  for (int k = 0; s_lo.value <= 0.0; ++k) {
    if (k == 200) throw NonConvergenceError("could not bracket shape root", lo, s_lo.value, 0);
    hi = lo;
    lo *= 0.5;
    s_lo = pooled_score(parts, lo);
  }
  Score s_hi = pooled_score(parts, hi);
  for (int k = 0; s_hi.value >= 0.0; ++k) {
    if (k == 200) throw NonConvergenceError("could not bracket shape root", hi, s_hi.value, 0);
    lo = hi;
    s_lo = s_hi;
    hi *= 2.0;
    s_hi = pooled_score(parts, hi);
  }

  double b = start;
  if (!(b > lo && b < hi)) b = 0.5 * (lo + hi);
  Score s = pooled_score(parts, b);
  double dx_old = hi - lo;
  double dx = dx_old;

  for (int it = 1; it <= kMaxIterations; ++it) {
    if (std::abs(s.value) <= kScoreTolerance) return {b, s.value, it - 1};
    if (s.value > 0.0) {
      lo = b;
    } else {
      hi = b;
    }

    const double newton = b - s.value / s.slope;
    const bool inside = newton > lo && newton < hi;
    const bool shrinking = std::abs(2.0 * s.value) <= std::abs(dx_old * s.slope);
    dx_old = dx;
    if (inside && shrinking) {
      dx = newton - b;
      b = newton;
    } else {
      dx = 0.5 * (hi - lo);
      b = lo + dx;
    }
    s = pooled_score(parts, b);

    // Bracket collapsed to rounding level: nothing more to gain.
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * b) {
      if (std::abs(s.value) <= kConvergedTolerance) return {b, s.value, it};
      throw NonConvergenceError("shape score stalled above tolerance", b, s.value, it);
    }
  }
  if (std::abs(s.value) <= kConvergedTolerance) return {b, s.value, kMaxIterations};
  throw NonConvergenceError("shape iteration cap reached", b, s.value, kMaxIterations);
}

double scale_for(const LogData& d, double shape) {
  double sum_w = 0.0;
  for (double l : d.shifted) sum_w += std::exp(shape * l);
  const double n = static_cast<double>(d.shifted.size());
  return std::exp(d.log_max + std::log(sum_w / n) / shape);
}

}  // namespace

FitResult fit_mle(const Sample& s) {
  const LogData d = prepare(s);
  const ShapeRoot root = solve_shape(std::span<const LogData>(&d, 1), d.initial_shape);
  const WeibullParams p(scale_for(d, root.shape), root.shape);

  FitResult r;
  r.params.push_back(p);
  r.log_likelihood = log_likelihood(p, s.values());
  r.iterations = root.iterations;
  r.score_residual = root.residual;
  r.converged = std::abs(root.residual) <= kConvergedTolerance;
  return r;
}

FitResult fit_mle_equal_shape(const Sample& x, const Sample& y) {
  const LogData parts[2] = {prepare(x), prepare(y)};
  const double start = 0.5 * (parts[0].initial_shape + parts[1].initial_shape);
  const ShapeRoot root = solve_shape(parts, start);
  const WeibullParams p1(scale_for(parts[0], root.shape), root.shape);
  const WeibullParams p2(scale_for(parts[1], root.shape), root.shape);

  FitResult r;
  r.params = {p1, p2};
  r.log_likelihood = log_likelihood(p1, x.values()) + log_likelihood(p2, y.values());
  r.iterations = root.iterations;
  r.score_residual = root.residual;
  r.converged = std::abs(root.residual) <= kConvergedTolerance;
  return r;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Sample parse_sample_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view field = trim(line);
    if (field.empty()) continue;
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw ParseError("line " + std::to_string(lineno) + ": not a number: '" +
                           std::string(field) + "'",
                       lineno);
    }
    seen_content = true;
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw ParseError("line " + std::to_string(lineno) +
                           ": observation must be finite and > 0",
                       lineno);
    }
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("no observations found");
  return Sample(std::move(values));
}

Sample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_sample_csv(in);
}

}  // namespace wovl
