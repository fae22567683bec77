#include "dimtrunc/sequences.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace dimtrunc {
namespace {

// Independent reference: sum_{j=s+1}^{J} j^-alpha plus the midpoint of the
// integral remainder bracket [int_{J+1}^inf, int_J^inf].
double brute_force_tail(double alpha, std::uint64_t s, std::uint64_t J = 1'000'000) {
  long double sum = 0.0L;
  for (std::uint64_t j = J; j > s; --j) sum += std::pow(static_cast<long double>(j), -alpha);
  const long double lo = std::pow(static_cast<long double>(J + 1), 1.0L - alpha) / (alpha - 1.0L);
  const long double hi = std::pow(static_cast<long double>(J), 1.0L - alpha) / (alpha - 1.0L);
  return static_cast<double>(sum + 0.5L * (lo + hi));
}

constexpr double kZeta3 = 1.2020569031595942854;
constexpr double kZeta12 = 5.5915824411777507765;  // zeta(1.2), mpmath

TEST(PowerTail, Zeta3MatchesBruteForceOracle) {
  const double oracle = brute_force_tail(3.0, 0);
  EXPECT_NEAR(oracle, kZeta3, 1e-13);
  const auto profile = DecayProfile::constant(1.0, 1.5, 0.8);
  EXPECT_NEAR(tail_sum_squared(profile, 0), kZeta3, 1e-12 * kZeta3);
  EXPECT_NEAR(tail_sum_squared(profile, 1), kZeta3 - 1.0, 1e-12 * (kZeta3 - 1.0));
}

TEST(PowerTail, SlowlyDecayingSeriesIsCertified) {
  const SeriesBracket b = power_tail(1.2, 0);
  EXPECT_LE(b.lower, kZeta12 * (1 + 1e-14));
  EXPECT_GE(b.upper, kZeta12 * (1 - 1e-14));
  EXPECT_LE(b.width(), 1e-12 * b.value());
  EXPECT_NEAR(b.value(), kZeta12, 1e-12 * kZeta12);
}

TEST(PowerTail, BracketWidthCertificate) {
  for (double alpha : {1.05, 1.2, 2.0, 3.0, 4.0, 6.0}) {
    for (std::uint64_t s : {0ull, 1ull, 7ull, 100ull, 4096ull, 1ull << 20}) {
      const SeriesBracket b = power_tail(alpha, s);
      EXPECT_LE(b.width(), 1e-12 * b.value()) << alpha << " " << s;
      EXPECT_LE(b.lower, b.upper);
    }
  }
}

TEST(PowerTail, AgreesWithBruteForceAtModerateS) {
  for (double alpha : {2.4, 3.0, 4.0}) {
    for (std::uint64_t s : {2ull, 17ull, 300ull}) {
      const double oracle = brute_force_tail(alpha, s);
      EXPECT_NEAR(power_tail(alpha, s).value(), oracle, 1e-12 * oracle) << alpha << " " << s;
    }
  }
}

TEST(PowerTail, RejectsDivergentExponent) {
  EXPECT_THROW(power_tail(1.0, 0), std::domain_error);
  EXPECT_THROW(power_tail(0.5, 3), std::domain_error);
}

TEST(DecayProfile, Invariants) {
  EXPECT_THROW(DecayProfile::constant(1.0, 1.0, 0.8), std::invalid_argument);
  EXPECT_THROW(DecayProfile::constant(1.0, 0.9, 0.8), std::invalid_argument);
  EXPECT_THROW(DecayProfile::constant(1.0, 1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(DecayProfile::constant(1.0, 1.5, 0.0), std::invalid_argument);
  EXPECT_THROW(DecayProfile::constant(-1.0, 1.5, 0.8), std::invalid_argument);
  EXPECT_FALSE(DecayProfile::constant(1.0, 1.5, 0.5).lp_summable());
  EXPECT_TRUE(DecayProfile::constant(1.0, 1.5, 0.8).lp_summable());
}

TEST(DecayProfile, ModulationMustStayInRange) {
  auto g = [](double x) { return 0.5 + 0.5 * x; };
  const auto profile = DecayProfile::modulated(2.0, 2.0, 0.7, g, 0.5);
  EXPECT_DOUBLE_EQ(profile.lower_constant(), 1.0);
  EXPECT_DOUBLE_EQ(profile.sup_norm(2), 0.5);
  EXPECT_DOUBLE_EQ(profile.at(2, 0.5), 0.5 * 0.75);
  EXPECT_THROW(DecayProfile::modulated(1.0, 2.0, 0.7, g, 0.6), std::invalid_argument);
  EXPECT_THROW(DecayProfile::modulated(1.0, 2.0, 0.7, [](double) { return 1.5; }, 0.5),
               std::invalid_argument);
  EXPECT_THROW(DecayProfile::modulated(1.0, 2.0, 0.7, g, 0.0), std::invalid_argument);
}

TEST(TailSumSquared, ModulatedNeedsPoint) {
  const auto profile = DecayProfile::modulated(1.0, 2.0, 0.7, [](double x) { return 0.5 + 0.5 * x; }, 0.5);
  EXPECT_THROW(tail_sum_squared(profile, 3), std::invalid_argument);
  const double base = tail_sum_squared(DecayProfile::constant(1.0, 2.0, 0.7), 3);
  EXPECT_NEAR(tail_sum_squared(profile, 3, 0.5), 0.75 * 0.75 * base, 1e-15);
}

TEST(TailSumSquared, ZeroScale) {
  const auto profile = DecayProfile::constant(0.0, 1.7, 0.8);
  EXPECT_EQ(tail_sum_squared(profile, 0), 0.0);
  EXPECT_EQ(tail_sum_squared(profile, 12), 0.0);
  EXPECT_EQ(head_sum_squared(profile, 12), 0.0);
}

TEST(HeadSumSquared, Examples) {
  EXPECT_EQ(head_sum_squared(DecayProfile::constant(1.0, 1.5, 0.8), 0), 0.0);
  EXPECT_DOUBLE_EQ(head_sum_squared(DecayProfile::constant(1.0, 1.5, 0.8), 2), 1.125);
  EXPECT_DOUBLE_EQ(head_sum_squared(DecayProfile::constant(2.0, 2.0, 0.8), 1), 4.0);
}

TEST(HeadTail, PartitionOfTotal) {
  for (double theta : {1.1, 1.5, 2.0, 3.0}) {
    const auto profile = DecayProfile::constant(1.3, theta, 0.95);
    const double total = tail_sum_squared(profile, 0);
    for (std::uint64_t s : {1ull, 2ull, 5ull, 64ull, 1000ull, 40000ull}) {
      const double sum = head_sum_squared(profile, s) + tail_sum_squared(profile, s);
      EXPECT_NEAR(sum, total, 1e-12 * total) << theta << " " << s;
    }
  }
}

TEST(TailSumSquared, StrictlyDecreasing) {
  const auto profile = DecayProfile::constant(0.7, 1.5, 0.8);
  double prev = tail_sum_squared(profile, 0);
  for (std::uint64_t s = 1; s <= 2000; ++s) {
    const double cur = tail_sum_squared(profile, s);
    ASSERT_LT(cur, prev) << s;
    prev = cur;
  }
}

TEST(TailIntegralLower, Examples) {
  EXPECT_DOUBLE_EQ(tail_integral_lower(1.5, 1), 0.125);
  EXPECT_NEAR(tail_integral_lower(2.0, 9), 1e-3 / 3.0, 1e-18);
  EXPECT_GE(kZeta3 - 1.0, tail_integral_lower(1.5, 1));
  EXPECT_THROW(tail_integral_lower(1.0, 3), std::domain_error);
  EXPECT_THROW(tail_integral_lower(1.5, 0), std::invalid_argument);
}

TEST(TailIntegralLower, RatioAtLeastOneAndBounded) {
  for (std::uint64_t s : {1ull, 10ull, 100ull, 10000ull}) {
    const double ratio = tail_sum_squared(DecayProfile::constant(1.0, 1.5, 0.8), s) /
                         tail_integral_lower(1.5, s);
    EXPECT_GE(ratio, 1.0);
    EXPECT_LE(ratio, std::pow((s + 1.0) / s, 2.0));
  }
}

TEST(StechkinBound, SingleTermSequence) {
  const std::vector<double> a = {1.0, 0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(stechkin_bound(a, 0.5, 1), 1.0);
}

TEST(StechkinBound, FiniteSequenceDominatesTail) {
  std::vector<double> a;
  for (int j = 1; j <= 10000; ++j) a.push_back(std::pow(j, -2.0));
  const double bound = stechkin_bound(a, 0.75, 4);
  double lp = 0.0;
  for (int j = 10000; j >= 1; --j) lp += std::pow(j, -1.5);
  EXPECT_NEAR(bound, std::pow(4.0, -5.0 / 3.0) * std::pow(lp, 8.0 / 3.0), 1e-12 * bound);
  EXPECT_NEAR(bound, 1.258233544282320236, 1e-12);  // mpmath
  double tail = 0.0;
  for (std::size_t j = a.size(); j > 4; --j) tail += a[j - 1] * a[j - 1];
  EXPECT_LE(tail, bound);
}

TEST(StechkinBound, ProfileMatchesSeriesOracle) {
  const auto profile = DecayProfile::constant(1.0, 1.5, 0.8);
  const double expected = std::pow(16.0, -1.5) * std::pow(kZeta12, 2.5);
  EXPECT_NEAR(stechkin_bound(profile, 0.8, 16), expected, 1e-11 * expected);
  EXPECT_NEAR(stechkin_bound(profile, 16), 1.1551991405002506997, 1e-11);  // mpmath
}

TEST(StechkinBound, Rejections) {
  const std::vector<double> increasing = {0.1, 0.2};
  EXPECT_THROW(stechkin_bound(increasing, 0.5, 1), std::invalid_argument);
  const std::vector<double> ok = {0.2, 0.1};
  EXPECT_THROW(stechkin_bound(ok, 1.0, 1), std::domain_error);
  EXPECT_THROW(stechkin_bound(ok, 0.0, 1), std::domain_error);
  EXPECT_THROW(stechkin_bound(DecayProfile::constant(1.0, 1.5, 0.5), 0.5, 3), std::domain_error);
}

TEST(StechkinBound, PropertyTailBelowBound) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta_dist(1.1, 3.0);
  std::uniform_real_distribution<double> c_dist(0.01, 5.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta = theta_dist(rng);
    const double p = 1.0 / theta + (1.0 - 1.0 / theta) * (0.05 + 0.9 * u(rng));
    const auto profile = DecayProfile::constant(c_dist(rng), theta, p);
    for (std::uint64_t s : {1ull, 3ull, 20ull, 500ull}) {
      ASSERT_LE(tail_sum_squared(profile, s), stechkin_bound(profile, s))
          << "theta=" << theta << " p=" << p << " s=" << s;
    }
  }
}

TEST(IntegralComparison, PropertyTailAboveIntegral) {
  for (double theta : {1.01, 1.2, 1.5, 2.0, 3.0, 5.0}) {
    for (double c : {0.1, 1.0, 3.0}) {
      const auto profile = DecayProfile::constant(c, theta, 0.999);
      for (std::uint64_t s = 1; s <= 5000; s = s * 3 / 2 + 1) {
        ASSERT_GE(tail_sum_squared(profile, s), c * c * tail_integral_lower(theta, s));
      }
    }
  }
}

}  // namespace
}  // namespace dimtrunc
