#include "wovl/overlap.hpp"

#include <algorithm>
#include <cmath>

#include "wovl/error.hpp"
#include "wovl/quadrature.hpp"

namespace wovl {

QuadratureSpec::QuadratureSpec(double abs_tol, double rel_tol, double tail_mass)
    : abs_tol_(abs_tol), rel_tol_(rel_tol), tail_mass_(tail_mass) {
  auto unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!unit(abs_tol) || !unit(rel_tol) || !unit(tail_mass)) {
    throw DomainError("quadrature tolerances and tail mass must lie in (0, 1)");
  }
}

std::string_view to_string(Coefficient c) {
  switch (c) {
    case Coefficient::delta: return "delta";
    case Coefficient::rho: return "rho";
    case Coefficient::lambda: return "lambda";
    case Coefficient::pianka: return "pianka";
    case Coefficient::kl: return "kl";
  }
  return "?";
}

std::optional<Coefficient> parse_coefficient(std::string_view name) {
  for (Coefficient c : {Coefficient::delta, Coefficient::rho, Coefficient::lambda,
                        Coefficient::pianka, Coefficient::kl}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

constexpr int kScanPoints = 4096;
constexpr double kCrossingWidth = 1e-12;
// exp(-700) is still a normal double.
constexpr double kMinLogX = -700.0;
// Widest initial panel in t. A lone 15-point panel over a long range can step
// over a narrow peak entirely and report zero with zero error.
constexpr double kMaxPanelWidth = 0.5;

// All integrals run in t = ln x, where Weibull densities are smooth and
// unimodal; dx = x dt.
double log_diff(const DistributionPair& pair, double t) {
  const double x = std::exp(t);
  return log_pdf(pair.f1, x) - log_pdf(pair.f2, x);
}

struct LogWindow {
  double lo;
  double hi;
};

LogWindow log_window(const DistributionPair& pair, const QuadratureSpec& spec) {
  const double p = spec.tail_mass();
  const double lo = std::min(quantile(pair.f1, p), quantile(pair.f2, p));
  const double hi = std::max(quantile(pair.f1, 1.0 - p), quantile(pair.f2, 1.0 - p));
  return {std::max(std::log(lo), kMinLogX), std::log(hi)};
}

// For integrals of f^2 and f1 f2 the mass below the usual window is not bounded
// by tail_mass when a shape is close to 1/2 (f^2 ~ x^(2b-2) near 0). Extend the
// lower end until the leading-order remainder of each int f^2 is below tail_mass.
double power_lower_bound(const WeibullParams& p, double tail) {
  const double a = p.scale();
  const double b = p.shape();
  const double k = 2.0 * b - 1.0;
  return std::log(a) + std::log(tail * k * a / (b * b)) / k;
}

std::vector<double> crossings_log(const DistributionPair& pair, const LogWindow& w) {
  std::vector<double> out;
  if (pair.f1 == pair.f2) return out;

  const double step = (w.hi - w.lo) / (kScanPoints - 1);
  auto grid = [&](int i) { return i == kScanPoints - 1 ? w.hi : w.lo + step * i; };

  double prev_t = grid(0);
  double prev_d = log_diff(pair, prev_t);
  if (prev_d == 0.0) out.push_back(prev_t);
  for (int i = 1; i < kScanPoints; ++i) {
    const double t = grid(i);
    const double d = log_diff(pair, t);
    if (d == 0.0) {
      out.push_back(t);
    } else if (prev_d != 0.0 && (d > 0.0) != (prev_d > 0.0)) {
      double a = prev_t;
      double b = t;
      double da = prev_d;
      // Width in t equals relative width in x to first order.
      while (b - a > kCrossingWidth) {
        const double m = 0.5 * (a + b);
        const double dm = log_diff(pair, m);
        if (dm == 0.0) {
          a = b = m;
          break;
        }
        if ((dm > 0.0) == (da > 0.0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_d = d;
  }
  return out;
}

// Splits every gap between consecutive breakpoints into panels no wider than
// kMaxPanelWidth.
std::vector<double> refine(const std::vector<double>& breaks) {
  std::vector<double> out = {breaks.front()};
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double a = breaks[i - 1];
    const double b = breaks[i];
    const auto pieces = static_cast<int>(std::ceil((b - a) / kMaxPanelWidth));
    for (int k = 1; k < pieces; ++k) out.push_back(a + (b - a) * k / pieces);
    out.push_back(b);
  }
  return out;
}

double integrate_log(const std::function<double(double, double)>& g,
                     const DistributionPair& pair, const std::vector<double>& breaks,
                     const QuadratureSpec& spec, double abs_scale = 1.0) {
  auto integrand = [&](double t) {
    const double x = std::exp(t);
    return x * g(log_pdf(pair.f1, x), log_pdf(pair.f2, x));
  };
  AdaptiveOptions o;
  o.abs_tol = spec.abs_tol() * abs_scale;
  o.rel_tol = spec.rel_tol();
  return integrate_adaptive(integrand, refine(breaks), o).value;
}

void require_square_integrable(const DistributionPair& pair) {
  if (!(pair.f1.shape() > 0.5) || !(pair.f2.shape() > 0.5)) {
    throw DivergentIntegralError(
        "integral of a squared Weibull density diverges for shape <= 1/2");
  }
}

struct PowerIntegrals {
  double f1f1;
  double f2f2;
  double f1f2;
};

// int f^2 dx = (b / a) Gamma(2 - 1/b) / 2^(2 - 1/b).
double square_integral(const WeibullParams& p) {
  const double e = 2.0 - 1.0 / p.shape();
  return p.shape() / p.scale() * std::exp(std::lgamma(e) - e * std::log(2.0));
}

PowerIntegrals power_integrals(const DistributionPair& pair, const QuadratureSpec& spec) {
  require_square_integrable(pair);
  const LogWindow w = log_window(pair, spec);
  const double lo = std::max(
      kMinLogX, std::min({w.lo, power_lower_bound(pair.f1, spec.tail_mass()),
                          power_lower_bound(pair.f2, spec.tail_mass())}));
  PowerIntegrals r;
  r.f1f1 = square_integral(pair.f1);
  r.f2f2 = square_integral(pair.f2);
  // Tolerance in units of the normaliser, so the ratios carry abs_tol.
  r.f1f2 = integrate_log([](double l1, double l2) { return std::exp(l1 + l2); }, pair,
                         {lo, w.hi}, spec, std::sqrt(r.f1f1 * r.f2f2));
  return r;
}

}  // namespace

Window integration_window(const DistributionPair& pair, const QuadratureSpec& spec) {
  const LogWindow w = log_window(pair, spec);
  return {std::exp(w.lo), std::exp(w.hi)};
}

std::vector<double> crossings(const DistributionPair& pair, const QuadratureSpec& spec) {
  std::vector<double> ts = crossings_log(pair, log_window(pair, spec));
  for (double& t : ts) t = std::exp(t);
  return ts;
}

double delta_exact(const DistributionPair& pair, const QuadratureSpec& spec) {
  const LogWindow w = log_window(pair, spec);
  std::vector<double> breaks = {w.lo};
  for (double t : crossings_log(pair, w)) {
    if (t > breaks.back() && t < w.hi) breaks.push_back(t);
  }
  breaks.push_back(w.hi);
  return integrate_log(
      [](double l1, double l2) { return std::exp(std::min(l1, l2)); }, pair, breaks, spec);
}

double coefficient_exact(Coefficient kind, const DistributionPair& pair,
                         const QuadratureSpec& spec) {
  switch (kind) {
    case Coefficient::delta:
      return delta_exact(pair, spec);
    case Coefficient::rho: {
      const LogWindow w = log_window(pair, spec);
      return integrate_log(
          [](double l1, double l2) { return std::exp(0.5 * (l1 + l2)); }, pair,
          {w.lo, w.hi}, spec);
    }
    case Coefficient::lambda: {
      const PowerIntegrals p = power_integrals(pair, spec);
      return 2.0 * p.f1f2 / (p.f1f1 + p.f2f2);
    }
    case Coefficient::pianka: {
      const PowerIntegrals p = power_integrals(pair, spec);
      return p.f1f2 / std::sqrt(p.f1f1 * p.f2f2);
    }
    case Coefficient::kl: {
      const LogWindow w = log_window(pair, spec);
      // (f1 - f2)(ln f1 - ln f2) with the log ratio taken analytically, so a
      // density that underflows still contributes 0 * finite.
      const double divergence = integrate_log(
          [](double l1, double l2) {
            return (std::exp(l1) - std::exp(l2)) * (l1 - l2);
          },
          pair, {w.lo, w.hi}, spec);
      return 1.0 / (1.0 + divergence);
    }
  }
  throw DomainError("unknown coefficient");
}

OvlValues ovl_values(const DistributionPair& pair, const QuadratureSpec& spec) {
  OvlValues v;
  v.delta = delta_exact(pair, spec);
  v.rho = coefficient_exact(Coefficient::rho, pair, spec);
  const PowerIntegrals p = power_integrals(pair, spec);
  v.lambda = 2.0 * p.f1f2 / (p.f1f1 + p.f2f2);
  v.pianka = p.f1f2 / std::sqrt(p.f1f1 * p.f2f2);
  v.kl = coefficient_exact(Coefficient::kl, pair, spec);
  return v;
}

}  // namespace wovl
