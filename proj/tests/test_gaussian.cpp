#include "dimtrunc/gaussian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace dimtrunc {
namespace {

TEST(LognormalMean, Values) {
  EXPECT_EQ(lognormal_mean(0.0), 1.0);
  EXPECT_NEAR(lognormal_mean(1.0), 1.6487212707001281468, 1e-15);
  EXPECT_NEAR(lognormal_mean(-2.0), 7.3890560989306502272, 1e-14);
  EXPECT_THROW(lognormal_mean(37.5), std::range_error);
  EXPECT_NO_THROW(lognormal_mean(-37.0));
}

TEST(LognormalMean, EvenSymmetry) {
  for (double b = 0.0; b <= 30.0; b += 0.37) EXPECT_EQ(lognormal_mean(b), lognormal_mean(-b));
}

TEST(TruncationGap, Basics) {
  EXPECT_EQ(truncation_gap(0.0, 0.0), 0.0);
  EXPECT_THROW(truncation_gap(-1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(truncation_gap(1.0, -0.5), std::invalid_argument);
  EXPECT_THROW(truncation_gap(1000.0, 500.0), std::range_error);
}

TEST(TruncationGap, ZetaExample) {
  // c=1, theta=1.5, s=2: head = 1.125, tail = zeta(3) - 1.125 (mpmath oracle)
  const double tail = 1.2020569031595942854 - 1.125;
  EXPECT_NEAR(0.5 * tail, 0.0385284516, 1e-10);
  EXPECT_NEAR(truncation_gap(1.125, tail), 0.068939068358541400687, 1e-16);
}

TEST(TruncationGap, TinyTailsSurvive) {
  EXPECT_GT(truncation_gap(0.0, 1e-300), 0.0);
  EXPECT_NEAR(truncation_gap(2.0, 1e-20), std::exp(1.0) * 0.5e-20, 1e-35);
}

TEST(TruncationGap, CompositionalIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double h = u(rng);
    const double t = u(rng);
    const double big = std::exp(0.5 * (h + t));
    const double direct = big - std::exp(0.5 * h);
    // The direct difference carries cancellation error of order eps * big.
    EXPECT_NEAR(truncation_gap(h, t), direct, 1e-14 * direct + 8e-16 * big);
  }
}

TEST(TruncationGap, ScalarInequalities) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = u(rng);
    const double gap = truncation_gap(0.0, 2.0 * t);
    ASSERT_LE(t, gap);
    ASSERT_LE(gap, t * std::exp(t) * (1 + 1e-15));
    const double em1 = std::expm1(t);
    ASSERT_GE(em1 * em1, t * t);
  }
}

TEST(GaussHermiteRule, Structure) {
  for (int order : {1, 2, 5, 10, 40, 64, 128}) {
    const GaussHermiteRule& rule = gauss_hermite_rule(order);
    ASSERT_EQ(rule.order, order);
    ASSERT_EQ(static_cast<int>(rule.nodes.size()), order);
    double total = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      EXPECT_GT(rule.weights[k], 0.0);
      EXPECT_EQ(rule.nodes[k], -rule.nodes[rule.nodes.size() - 1 - k]);
      total += rule.weights[k];
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    if (order % 2 == 1) {
      EXPECT_EQ(rule.nodes[static_cast<std::size_t>(order / 2)], 0.0);
    }
  }
  EXPECT_THROW(gauss_hermite_rule(0), std::out_of_range);
  EXPECT_THROW(gauss_hermite_rule(129), std::out_of_range);
}

TEST(GaussHermiteRule, ExactGaussianMoments) {
  // E[Y^{2k}] = (2k-1)!!, exact for 2k <= 2n-1.
  const GaussHermiteRule& rule = gauss_hermite_rule(10);
  double double_factorial = 1.0;
  for (int k = 0; k <= 9; ++k) {
    if (k > 0) double_factorial *= 2 * k - 1;
    double m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      m += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
    }
    EXPECT_NEAR(m, double_factorial, 1e-12 * double_factorial) << k;
  }
}

TEST(GaussHermiteMean, OracleForLognormalMean) {
  for (int order : {1, 3, 40}) EXPECT_NEAR(gauss_hermite_mean(0.0, order), 1.0, 1e-15);
  for (double b : {0.5, 1.0, 2.0, -1.0, -2.0}) {
    const double exact = lognormal_mean(b);
    EXPECT_NEAR(gauss_hermite_mean(b, 40), exact, 1e-12 * exact) << b;
  }
}

TEST(GaussHermiteMean, ConvergesWithOrder) {
  const double exact = lognormal_mean(2.0);
  EXPECT_GT(std::abs(gauss_hermite_mean(2.0, 5) - exact), std::abs(gauss_hermite_mean(2.0, 40) - exact));
  double prev = std::abs(gauss_hermite_mean(2.0, 2) - exact);
  for (int k = 2; k <= 8; ++k) {
    const double err = std::abs(gauss_hermite_mean(2.0, 2 * k) - exact);
    EXPECT_LE(err, prev + 1e-14 * exact) << 2 * k;
    prev = err;
  }
}

TEST(MonteCarlo, DegenerateProfileIsExact) {
  const auto profile = DecayProfile::constant(0.0, 1.5, 0.8);
  const McEstimate est = mc_mean_inverse_coefficient(profile, 0.3, 5, 1000, 99);
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.n_samples, 1000u);
  EXPECT_EQ(est.seed, 99u);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
  const auto profile = DecayProfile::constant(1.0, 1.5, 0.8);
  const double target = truncated_inverse_mean(profile, 0.42, 3);
  EXPECT_NEAR(target, std::exp(0.5 * head_sum_squared(profile, 3)), 1e-15);
  const McEstimate a = mc_mean_inverse_coefficient(profile, 0.42, 3, 1'000'000, 2024);
  EXPECT_LE(std::abs(a.mean - target), 3.0 * a.std_error);
  const McEstimate b = mc_mean_inverse_coefficient(profile, 0.42, 3, 1'000'000, 77);
  EXPECT_NE(a.mean, b.mean);
  EXPECT_LE(std::abs(b.mean - target), 4.0 * b.std_error);
}

TEST(MonteCarlo, BitIdenticalAcrossThreadCounts) {
  const auto profile = DecayProfile::constant(1.0, 2.0, 0.8);
  McOptions options;
  options.n_samples = 200'003;
  options.seed = 5;
  options.chunk_size = 4096;
  options.threads = 1;
  const McEstimate serial = mc_mean_inverse_coefficient(profile, 0.5, 4, options);
  options.threads = 7;
  const McEstimate parallel = mc_mean_inverse_coefficient(profile, 0.5, 4, options);
  EXPECT_EQ(serial.mean, parallel.mean);
  EXPECT_EQ(serial.std_error, parallel.std_error);
  EXPECT_EQ(serial.n_samples, 200'003u);
}

TEST(MonteCarlo, Preconditions) {
  const auto profile = DecayProfile::constant(1.0, 2.0, 0.8);
  EXPECT_THROW(mc_mean_inverse_coefficient(profile, 0.5, 0, 100, 1), std::invalid_argument);
  EXPECT_THROW(mc_mean_inverse_coefficient(profile, 0.5, 2, 1, 1), std::invalid_argument);
}

}  // namespace
}  // namespace dimtrunc
