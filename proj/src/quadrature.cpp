#include "wovl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "wovl/error.hpp"

namespace wovl {

namespace {

// Kronrod nodes on [0, 1]; odd indices are the embedded Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    const double sum = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints,
                                     const AdaptiveOptions& opts) {
  if (breakpoints.size() < 2) {
    throw DomainError("integration needs at least two breakpoints");
  }
  std::vector<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b >= a)) throw DomainError("breakpoints must be ascending");
    if (b == a) continue;
    heap.push_back(gauss_kronrod(f, a, b));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end());

  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  // The running sums drift; confirm convergence against a fresh sum.
  auto done = [&] {
    if (total_err > tolerance()) return false;
    total = 0.0;
    total_err = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      total_err += p.error;
    }
    return total_err <= tolerance();
  };

  while (!heap.empty() && !done()) {
    if (heap.size() >= opts.max_intervals) {
      throw AccuracyError("adaptive quadrature exhausted its interval budget (error estimate " +
                          std::to_string(total_err) + ")");
    }
    std::pop_heap(heap.begin(), heap.end());
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw AccuracyError("adaptive quadrature reached rounding-level panels");
    }
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  // Sum in a fixed order so the result does not depend on heap layout.
  IntegrationResult r;
  r.intervals = heap.size();
  std::sort(heap.begin(), heap.end(), [](const Panel& l, const Panel& rr) { return l.a < rr.a; });
  for (const Panel& p : heap) {
    r.value += p.value;
    r.error += p.error;
  }
  return r;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     double a, double b, const AdaptiveOptions& opts) {
  const double bp[2] = {a, b};
  return integrate_adaptive(f, bp, opts);
}

}  // namespace wovl
