#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace wovl {

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::size_t max_intervals = 20000;
};

// Global adaptive Gauss-Kronrod (7/15 point) integration of f over the
// partition defined by `breakpoints` (ascending, at least two entries).
// Panels never straddle a breakpoint, so kinks placed there are harmless.
// The interval with the largest error estimate is bisected until the summed
// estimate falls below max(abs_tol, rel_tol * |value|).
// Throws AccuracyError when the interval budget runs out first.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints,
                                     const AdaptiveOptions& opts = {});

IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                     double a, double b,
                                     const AdaptiveOptions& opts = {});

}  // namespace wovl
