#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "wovl/distributions.hpp"

namespace wovl {

struct DistributionPair {
  WeibullParams f1;
  WeibullParams f2;
};

// Controls the exact-coefficient integrals. The integration window spans the
// tail_mass and 1 - tail_mass quantiles of both densities.
class QuadratureSpec {
 public:
  QuadratureSpec() = default;
  // Throws DomainError unless every field lies in (0, 1).
  QuadratureSpec(double abs_tol, double rel_tol, double tail_mass);

  double abs_tol() const noexcept { return abs_tol_; }
  double rel_tol() const noexcept { return rel_tol_; }
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double abs_tol_ = 1e-9;
  double rel_tol_ = 1e-9;
  double tail_mass_ = 1e-12;
};

enum class Coefficient { delta, rho, lambda, pianka, kl };

std::string_view to_string(Coefficient c);
std::optional<Coefficient> parse_coefficient(std::string_view name);

struct OvlValues {
  double delta = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  double pianka = 0.0;
  double kl = 0.0;
};

struct Window {
  double lo;
  double hi;
};

Window integration_window(const DistributionPair& pair, const QuadratureSpec& spec = {});

// Points inside the window where f1 = f2, ascending. Found by a sign scan of
// ln f1 - ln f2 on a 4096-point log-spaced grid, refined by bisection to a
// relative width of 1e-12. Identical densities give an empty list.
std::vector<double> crossings(const DistributionPair& pair, const QuadratureSpec& spec = {});

// Weitzman coefficient: integral of min{f1, f2}, integrated piecewise between
// consecutive crossings.
double delta_exact(const DistributionPair& pair, const QuadratureSpec& spec = {});

// rho     = int sqrt(f1 f2)
// lambda  = 2 int f1 f2 / (int f1^2 + int f2^2)
// pianka  = int f1 f2 / sqrt(int f1^2 * int f2^2)
// kl      = 1 / (1 + int (f1 - f2) ln(f1 / f2))
// Coefficient::delta forwards to delta_exact().
// lambda and pianka need both shapes > 1/2, else DivergentIntegralError.
double coefficient_exact(Coefficient kind, const DistributionPair& pair,
                         const QuadratureSpec& spec = {});

OvlValues ovl_values(const DistributionPair& pair, const QuadratureSpec& spec = {});

}  // namespace wovl
