#pragma once

// Power-law decay sequences c * j^-theta (optionally modulated by a spatial
// profile g), their certified squared tail/head sums, and Stechkin's bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace dimtrunc {

enum class ProfileKind { Constant, Modulated };

/// Two-sided enclosure of a series value. `value()` is the midpoint.
struct SeriesBracket {
  double lower = 0.0;
  double upper = 0.0;

  double value() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }

  SeriesBracket scaled(double factor) const {
    return factor >= 0.0 ? SeriesBracket{factor * lower, factor * upper}
                         : SeriesBracket{factor * upper, factor * lower};
  }
};

inline constexpr double kSeriesRelTol = 1e-12;

namespace detail {

// B_{2k} / (2k)! for k = 1..5.
inline constexpr std::array<double, 5> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
};

// Euler-Maclaurin expansion of sum_{j >= n} j^-alpha. For the completely
// monotone t^-alpha the error after m correction terms has the sign of the
// first omitted term and is bounded by it, so the last two partial
// expansions enclose the remainder.
inline SeriesBracket euler_maclaurin_remainder(double alpha, double n) {
  double approx = std::pow(n, 1.0 - alpha) / (alpha - 1.0) + 0.5 * std::pow(n, -alpha);
  double rising = alpha;  // (alpha)_{2k-1}
  double power = std::pow(n, -alpha - 1.0);
  double previous = approx;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    if (k > 0) {
      const double a = alpha + 2.0 * static_cast<double>(k);
      rising *= (a - 1.0) * a;
      power /= n * n;
    }
    previous = approx;
    approx += kBernoulliOverFactorial[k] * rising * power;
  }
  return {std::min(previous, approx), std::max(previous, approx)};
}

// sum_{j=first}^{last} j^-alpha, smallest terms first.
inline double power_block(double alpha, std::uint64_t first, std::uint64_t last) {
  double sum = 0.0;
  double compensation = 0.0;
  for (std::uint64_t j = last; j >= first && j > 0; --j) {
    const double term = std::pow(static_cast<double>(j), -alpha) - compensation;
    const double next = sum + term;
    compensation = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace detail

/// Certified enclosure of sum_{j > s} j^-alpha for alpha > 1, with relative
/// width at most `rel_tol`.
inline SeriesBracket power_tail(double alpha, std::uint64_t s, double rel_tol = kSeriesRelTol) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw std::domain_error("power_tail: exponent must exceed 1 (divergent series)");
  }
  std::uint64_t explicit_terms = 8;
  for (int attempt = 0; attempt < 24; ++attempt) {
    const double head = detail::power_block(alpha, s + 1, s + explicit_terms);
    const SeriesBracket rest =
        detail::euler_maclaurin_remainder(alpha, static_cast<double>(s + explicit_terms + 1));
    const SeriesBracket total{head + rest.lower, head + rest.upper};
    if (total.width() <= rel_tol * total.value()) return total;
    explicit_terms *= 2;
  }
  throw std::runtime_error("power_tail: bracket did not reach the requested tolerance");
}

/// sum_{j=1}^{s} j^-alpha.
inline double power_head(double alpha, std::uint64_t s) {
  return s == 0 ? 0.0 : detail::power_block(alpha, 1, s);
}

/// psi_j(x) = c j^-theta g(x) (Modulated) or c j^-theta (Constant).
class DecayProfile {
 public:
  using Modulation = std::function<double(double)>;

  static DecayProfile constant(double c, double theta, double p) {
    return DecayProfile(c, theta, p, ProfileKind::Constant, {}, 1.0);
  }

  /// `g` must map (0,1) into [g_min, 1]; checked on a sample grid.
  static DecayProfile modulated(double c, double theta, double p, Modulation g, double g_min) {
    if (!g) throw std::invalid_argument("DecayProfile: modulation function is empty");
    if (!(g_min > 0.0 && g_min <= 1.0)) {
      throw std::invalid_argument("DecayProfile: g_min must lie in (0, 1]");
    }
    constexpr int kSamples = 257;
    constexpr double kSlack = 1e-12;
    for (int i = 1; i < kSamples; ++i) {
      const double x = static_cast<double>(i) / kSamples;
      const double gx = g(x);
      if (!(gx >= g_min - kSlack && gx <= 1.0 + kSlack)) {
        throw std::invalid_argument("DecayProfile: modulation leaves [g_min, 1] at x = " +
                                    std::to_string(x));
      }
    }
    return DecayProfile(c, theta, p, ProfileKind::Modulated, std::move(g), g_min);
  }

  double c() const { return c_; }
  double theta() const { return theta_; }
  double p() const { return p_; }
  ProfileKind kind() const { return kind_; }
  double g_min() const { return g_min_; }

  /// Lower-bound constant: psi_j(x) >= lower_constant() * j^-theta.
  double lower_constant() const { return c_ * g_min_; }

  /// Whether (sup_x psi_j) lies in l^p, i.e. p * theta > 1.
  bool lp_summable() const { return p_ * theta_ > 1.0; }

  double modulation(double x) const { return kind_ == ProfileKind::Modulated ? g_(x) : 1.0; }

  /// sup_x psi_j(x) = c j^-theta (the modulation is bounded by 1).
  double sup_norm(std::uint64_t j) const {
    return c_ * std::pow(static_cast<double>(j), -theta_);
  }

  double at(std::uint64_t j, double x) const { return sup_norm(j) * modulation(x); }

 private:
  DecayProfile(double c, double theta, double p, ProfileKind kind, Modulation g, double g_min)
      : c_(c), theta_(theta), p_(p), kind_(kind), g_(std::move(g)), g_min_(g_min) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("DecayProfile: c must be a finite nonnegative number");
    }
    if (!(theta > 1.0) || !std::isfinite(theta)) {
      throw std::invalid_argument("DecayProfile: theta must exceed 1");
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("DecayProfile: p must lie in (0, 1)");
    }
  }

  double c_;
  double theta_;
  double p_;
  ProfileKind kind_;
  Modulation g_;
  double g_min_;
};

namespace detail {

inline double squared_modulation(const DecayProfile& profile, std::optional<double> at_x) {
  if (profile.kind() == ProfileKind::Constant) return 1.0;
  if (!at_x) throw std::invalid_argument("modulated profile requires an evaluation point");
  const double g = profile.modulation(*at_x);
  return g * g;
}

}  // namespace detail

/// Enclosure of sum_{j > s} psi_j(x)^2.
inline SeriesBracket tail_sum_squared_bracket(const DecayProfile& profile, std::uint64_t s,
                                              std::optional<double> at_x = std::nullopt) {
  const double scale = profile.c() * profile.c() * detail::squared_modulation(profile, at_x);
  if (scale == 0.0) return {};
  return power_tail(2.0 * profile.theta(), s).scaled(scale);
}

inline double tail_sum_squared(const DecayProfile& profile, std::uint64_t s,
                               std::optional<double> at_x = std::nullopt) {
  return tail_sum_squared_bracket(profile, s, at_x).value();
}

inline double head_sum_squared(const DecayProfile& profile, std::uint64_t s,
                               std::optional<double> at_x = std::nullopt) {
  const double scale = profile.c() * profile.c() * detail::squared_modulation(profile, at_x);
  if (scale == 0.0) return 0.0;
  return scale * power_head(2.0 * profile.theta(), s);
}

/// s^{-2/p+1} (sum_j a_j^p)^{2/p} for a finite nonincreasing nonnegative sequence.
inline double stechkin_bound(std::span<const double> values, double p, std::uint64_t s) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("stechkin_bound: p must lie in (0, 1)");
  if (s == 0) throw std::invalid_argument("stechkin_bound: s must be positive");
  double lp_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("stechkin_bound: entries must be finite and nonnegative");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw std::invalid_argument("stechkin_bound: sequence must be nonincreasing");
    }
    lp_sum += std::pow(values[i], p);
  }
  return std::pow(static_cast<double>(s), 1.0 - 2.0 / p) * std::pow(lp_sum, 2.0 / p);
}

/// sum_j (sup_x psi_j)^p, certified.
inline SeriesBracket lp_sum(const DecayProfile& profile, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("lp_sum: p must lie in (0, 1)");
  if (!(p * profile.theta() > 1.0)) {
    throw std::domain_error("lp_sum: p * theta <= 1, the sequence is not p-summable");
  }
  if (profile.c() == 0.0) return {};
  return power_tail(p * profile.theta(), 0).scaled(std::pow(profile.c(), p));
}

/// Stechkin's bound for the profile's sup-norm sequence.
inline double stechkin_bound(const DecayProfile& profile, double p, std::uint64_t s) {
  if (s == 0) throw std::invalid_argument("stechkin_bound: s must be positive");
  const double sum = lp_sum(profile, p).value();
  return std::pow(static_cast<double>(s), 1.0 - 2.0 / p) * std::pow(sum, 2.0 / p);
}

inline double stechkin_bound(const DecayProfile& profile, std::uint64_t s) {
  return stechkin_bound(profile, profile.p(), s);
}

/// int_{s+1}^inf tau^{-2 theta} d tau = (s+1)^{-2 theta + 1} / (2 theta - 1).
inline double tail_integral_lower(double theta, std::uint64_t s) {
  if (!(theta > 1.0)) throw std::domain_error("tail_integral_lower: theta must exceed 1");
  if (s == 0) throw std::invalid_argument("tail_integral_lower: s must be positive");
  return std::pow(static_cast<double>(s + 1), 1.0 - 2.0 * theta) / (2.0 * theta - 1.0);
}

}  // namespace dimtrunc
