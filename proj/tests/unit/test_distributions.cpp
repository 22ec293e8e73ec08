#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "wovl/distributions.hpp"
#include "wovl/error.hpp"
#include "wovl/quadrature.hpp"

using namespace wovl;
namespace ref = wovl::testing;

TEST(WeibullParams, RejectsNonPositiveAndNonFinite) {
  EXPECT_THROW(WeibullParams(0.0, 1.0), DomainError);
  EXPECT_THROW(WeibullParams(1.0, -2.0), DomainError);
  EXPECT_THROW(WeibullParams(std::nan(""), 1.0), DomainError);
  EXPECT_THROW(WeibullParams(1.0, std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_NO_THROW(WeibullParams(0.5, 20.4));
}

TEST(Sample, RejectsEmptyAndNonPositive) {
  EXPECT_THROW(Sample({}), DomainError);
  EXPECT_THROW(Sample({1.0, 0.0}), DomainError);
  EXPECT_THROW(Sample({1.0, -3.0}), DomainError);
}

TEST(Pdf, ExponentialCase) {
  EXPECT_NEAR(pdf(WeibullParams(1, 1), 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(pdf(WeibullParams(1, 1), 1.0), 0.3678794, 1e-7);
}

TEST(Pdf, VanishesAtOriginForShapeAboveOne) {
  const WeibullParams p(1, 2);
  EXPECT_LT(pdf(p, 1e-6), 1e-5);
  EXPECT_LT(pdf(p, 1e-12), pdf(p, 1e-6));
}

TEST(Pdf, MatchesHighPrecisionValue) {
  // 40-digit evaluation of (3/2)(0.85)^2 exp(-0.85^3).
  EXPECT_NEAR(pdf(WeibullParams(2, 3), 1.7), 0.5864324742782467435, 1e-15);
}

TEST(Pdf, DomainErrors) {
  const WeibullParams p(1, 2);
  EXPECT_THROW(pdf(p, 0.0), DomainError);
  EXPECT_THROW(pdf(p, -1.0), DomainError);
  EXPECT_THROW(log_pdf(p, 0.0), DomainError);
  EXPECT_THROW(cdf(p, -0.5), DomainError);
}

TEST(Pdf, IntegratesToOne) {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 3.0}, {2.3, 1.7}, {0.7, 0.6}, {3.0, 20.4}}) {
    const WeibullParams p(a, b);
    const double lo = quantile(p, 1e-12);
    const double hi = quantile(p, 1.0 - 1e-12);
    // Integrate in log space as the overlap module does.
    const auto r = integrate_adaptive(
        [&](double t) {
          const double x = std::exp(t);
          return x * pdf(p, x);
        },
        std::log(lo), std::log(hi));
    EXPECT_NEAR(r.value, 1.0, 1e-8) << "a=" << a << " b=" << b;
  }
}

TEST(Cdf, KnownValues) {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {2.5, 0.7}, {0.3, 9.0}}) {
    EXPECT_NEAR(cdf(WeibullParams(a, b), a), 1.0 - std::exp(-1.0), 1e-15);
  }
  EXPECT_NEAR(cdf(WeibullParams(1, 1), std::log(2.0)), 0.5, 1e-15);
}

TEST(Cdf, MatchesQuadratureOfPdf) {
  // 40-digit quadrature of the density over (0, 3.1).
  EXPECT_NEAR(cdf(WeibullParams(1.5, 2.5), 3.1), 0.99784531144096645637, 1e-9);
}

TEST(Cdf, Nondecreasing) {
  const WeibullParams p(1.3, 0.8);
  double prev = 0.0;
  for (double x = 1e-6; x < 50; x *= 1.1) {
    const double c = cdf(p, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Quantile, InverseOfCdf) {
  EXPECT_NEAR(quantile(WeibullParams(1, 1), 1.0 - std::exp(-1.0)), 1.0, 1e-12);
  const WeibullParams p(3, 4);
  EXPECT_NEAR(quantile(p, cdf(p, 2.2)), 2.2, 1e-10);
}

TEST(Quantile, UpperIntegrationCutoff) {
  const double q = quantile(WeibullParams(1, 3), 0.999999999999);
  EXPECT_TRUE(std::isfinite(q));
  // 40-digit evaluation; the decimal probability itself carries ~1e-4 relative error in 1-p.
  EXPECT_NEAR(q, 3.0231914099688452, 1e-5);
}

TEST(Quantile, RoundTripGridAndMonotone) {
  for (auto [a, b] : {std::pair{1.0, 3.0}, {0.4, 0.7}, {12.0, 1.0}, {1.0, 20.4}}) {
    const WeibullParams p(a, b);
    double prev = 0.0;
    for (int k = 1; k <= 999; ++k) {
      const double prob = k / 1000.0;
      const double q = quantile(p, prob);
      EXPECT_NEAR(cdf(p, q), prob, 1e-10);
      EXPECT_GT(q, prev);
      prev = q;
    }
  }
}

TEST(Quantile, DomainErrors) {
  const WeibullParams p(1, 1);
  EXPECT_THROW(quantile(p, 0.0), DomainError);
  EXPECT_THROW(quantile(p, 1.0), DomainError);
  EXPECT_THROW(quantile(p, -0.1), DomainError);
}

TEST(Sampling, Deterministic) {
  const WeibullParams p(1.2, 2.0);
  RandomStream s1(42), s2(42);
  const Sample a = sample(p, 500, s1);
  const Sample b = sample(p, 500, s2);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST(Sampling, MeanMatchesGammaFunction) {
  const WeibullParams p(1, 3);
  RandomStream s(7);
  const Sample x = sample(p, 100000, s);
  double m = 0.0, v = 0.0;
  for (double xi : x.values()) m += xi;
  m /= 100000.0;
  for (double xi : x.values()) v += (xi - m) * (xi - m);
  const double se = std::sqrt(v / 99999.0 / 100000.0);
  // Gamma(4/3), 40-digit value.
  EXPECT_LT(std::abs(m - 0.89297951156924921), 3.0 * se);
}

TEST(Sampling, ExponentialEmpiricalCdf) {
  RandomStream s(11);
  const Sample x = sample(WeibullParams(1, 1), 100000, s);
  const auto below = std::count_if(x.values().begin(), x.values().end(), [](double v) { return v <= 1.0; });
  EXPECT_NEAR(static_cast<double>(below) / 100000.0, 1.0 - std::exp(-1.0), 0.005);
}

TEST(Sampling, KolmogorovSmirnovSanity) {
  for (auto [a, b] : {std::pair{1.0, 3.0}, {2.0, 0.8}}) {
    const WeibullParams p(a, b);
    RandomStream s(2024);
    const Sample x = sample(p, 100000, s);
    std::vector<double> v(x.values().begin(), x.values().end());
    std::sort(v.begin(), v.end());
    double d = 0.0;
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double c = cdf(p, v[i]);
      d = std::max({d, std::abs(c - i / n), std::abs((i + 1) / n - c)});
    }
    EXPECT_LT(d, 0.01);
  }
}

TEST(FitMle, DegenerateSamples) {
  EXPECT_THROW(fit_mle(Sample({1, 1, 1})), DegenerateSampleError);
  EXPECT_THROW(fit_mle(Sample({2.5})), DegenerateSampleError);
}

TEST(FitMle, LargeSampleRecoversParametersAndMatchesGridSearch) {
  RandomStream s(314159);
  const Sample x = sample(WeibullParams(1, 3), 10000, s);
  const FitResult f = fit_mle(x);
  ASSERT_EQ(f.params.size(), 1u);
  EXPECT_TRUE(f.converged);
  EXPECT_LE(std::abs(f.score_residual), 1e-8);
  const double a = f.params[0].scale();
  const double b = f.params[0].shape();
  EXPECT_GT(a, 0.97);
  EXPECT_LT(a, 1.03);
  EXPECT_GT(b, 2.90);
  EXPECT_LT(b, 3.10);

  const auto grid = ref::grid_search_mle(x.values(), 0.5, 2.0, 1.0, 5.0, 0.001);
  EXPECT_NEAR(grid.scale, a, 0.0015);
  EXPECT_NEAR(grid.shape, b, 0.0015);
  const double ll = ref::ref_log_likelihood(x.values(), a, b);
  EXPECT_NEAR(ll, f.log_likelihood, 1e-8 * std::abs(ll));
  EXPECT_GE(ll, grid.log_likelihood - 1e-9 * std::abs(ll));
}

TEST(FitMle, ScaleEquivariance) {
  RandomStream s(5);
  for (int trial = 0; trial < 25; ++trial) {
    const double shape = 0.5 + 5.0 * s.uniform_open();
    const std::size_t n = 2 + static_cast<std::size_t>(200 * s.uniform_open());
    const Sample x = sample(WeibullParams(0.5 + 3 * s.uniform_open(), shape), n, s);
    const double c = trial == 0 ? 10.0 : std::exp(6.0 * (s.uniform_open() - 0.5));
    const FitResult f = fit_mle(x);
    const FitResult g = fit_mle(x.scaled(c));
    EXPECT_NEAR(g.params[0].shape(), f.params[0].shape(), 1e-8);
    EXPECT_NEAR(g.params[0].scale(), c * f.params[0].scale(), 1e-8 * c * f.params[0].scale());
  }
}

TEST(FitMle, TwoPointSample) {
  const FitResult f = fit_mle(Sample({1.0, 2.0}));
  EXPECT_TRUE(f.converged);
  EXPECT_GT(f.params[0].shape(), 0.0);
}

TEST(FitMleEqualShape, IdenticalSamplesReduceToSingleFit) {
  RandomStream s(99);
  const Sample x = sample(WeibullParams(1.4, 2.2), 300, s);
  const FitResult single = fit_mle(x);
  const FitResult pooled = fit_mle_equal_shape(x, x);
  ASSERT_EQ(pooled.params.size(), 2u);
  EXPECT_NEAR(pooled.params[0].shape(), single.params[0].shape(), 1e-8);
  EXPECT_EQ(pooled.params[0].scale(), pooled.params[1].scale());
  EXPECT_EQ(pooled.params[0].shape(), pooled.params[1].shape());
}

TEST(FitMleEqualShape, LargeSamplesMatchGridSearch) {
  RandomStream s(271828);
  const Sample x = sample(WeibullParams(1, 3), 10000, s);
  const Sample y = sample(WeibullParams(1.5, 3), 10000, s);
  const FitResult f = fit_mle_equal_shape(x, y);
  const double b = f.params[0].shape();
  EXPECT_GT(b, 2.90);
  EXPECT_LT(b, 3.10);
  EXPECT_GT(f.params[0].scale(), 0.97);
  EXPECT_LT(f.params[0].scale(), 1.03);
  EXPECT_GT(f.params[1].scale(), 1.45);
  EXPECT_LT(f.params[1].scale(), 1.55);

  // The pooled likelihood separates in the two scales for each shape, so the
  // exhaustive (a1, a2, b) lattice maximum is found shape by shape.
  double best = -std::numeric_limits<double>::infinity();
  double best_b = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double bb = 1.0 + 0.001 * i;
    const auto gx = ref::grid_search_mle(x.values(), 0.5, 2.0, bb, bb, 0.001);
    const auto gy = ref::grid_search_mle(y.values(), 0.5, 2.0, bb, bb, 0.001);
    if (gx.log_likelihood + gy.log_likelihood > best) {
      best = gx.log_likelihood + gy.log_likelihood;
      best_b = bb;
    }
  }
  EXPECT_NEAR(best_b, b, 0.0015);
  EXPECT_GE(f.log_likelihood, best - 1e-9 * std::abs(best));
}

TEST(FitMleEqualShape, ScaleEquivariance) {
  RandomStream s(17);
  const Sample x = sample(WeibullParams(1, 3), 80, s);
  const Sample y = sample(WeibullParams(2, 3), 60, s);
  const FitResult f = fit_mle_equal_shape(x, y);
  const double c = 7.5;
  const FitResult g = fit_mle_equal_shape(x.scaled(c), y.scaled(c));
  EXPECT_NEAR(g.params[0].shape(), f.params[0].shape(), 1e-8);
  EXPECT_NEAR(g.params[0].scale(), c * f.params[0].scale(), 1e-8 * c);
  EXPECT_NEAR(g.params[1].scale(), c * f.params[1].scale(), 1e-8 * c);
}

TEST(FitMleEqualShape, DegenerateInputPropagates) {
  EXPECT_THROW(fit_mle_equal_shape(Sample({1, 1}), Sample({1, 2, 3})), DegenerateSampleError);
}

TEST(SampleCsv, HeaderBlankLinesAndValues) {
  std::istringstream in("x\n1.5\n\n 2.25 \n3e-1\r\n");
  const Sample s = parse_sample_csv(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 1.5);
  EXPECT_EQ(s[1], 2.25);
  EXPECT_EQ(s[2], 0.3);
}

TEST(SampleCsv, NoHeader) {
  std::istringstream in("1\n2\n");
  EXPECT_EQ(parse_sample_csv(in).size(), 2u);
}

TEST(SampleCsv, ErrorsNameTheLine) {
  {
    std::istringstream in("value\n1.0\nabc\n");
    try {
      parse_sample_csv(in);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 3u);
      EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
  }
  {
    std::istringstream in("1.0\n-2\n");
    try {
      parse_sample_csv(in);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u);
    }
  }
  {
    std::istringstream in("h1\nh2\n");
    EXPECT_THROW(parse_sample_csv(in), ParseError);
  }
  {
    std::istringstream in("x\n0\n");
    EXPECT_THROW(parse_sample_csv(in), ParseError);
  }
  {
    std::istringstream in("");
    EXPECT_THROW(parse_sample_csv(in), ParseError);
  }
}
