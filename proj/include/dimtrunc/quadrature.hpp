#pragma once

// Composite Gauss-Legendre quadrature with panel doubling.

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimtrunc {

struct GaussLegendreRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

inline constexpr int kMaxGaussLegendreNodes = 64;

namespace detail {

inline GaussLegendreRule build_gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached n-point rule, 1 <= n <= 64. Thread-safe.
inline const GaussLegendreRule& gauss_legendre_rule(int n) {
  if (n < 1 || n > kMaxGaussLegendreNodes) {
    throw std::out_of_range("gauss_legendre_rule: node count must lie in [1, 64]");
  }
  static std::array<std::once_flag, kMaxGaussLegendreNodes + 1> flags;
  static std::array<GaussLegendreRule, kMaxGaussLegendreNodes + 1> rules;
  const auto idx = static_cast<std::size_t>(n);
  std::call_once(flags[idx], [&] { rules[idx] = detail::build_gauss_legendre(n); });
  return rules[idx];
}

struct QuadSettings {
  int nodes = 16;
  int panels = 64;
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_panels = 1 << 14;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

inline void validate(const QuadSettings& settings) {
  if (settings.nodes < 1 || settings.nodes > kMaxGaussLegendreNodes || settings.panels < 1 ||
      settings.max_panels < settings.panels || !(settings.rel_tol > 0.0) ||
      !(settings.abs_tol >= 0.0)) {
    throw std::invalid_argument("QuadSettings: invalid quadrature settings");
  }
}

/// Maps the rule to [a, b] and calls visit(x, w) for each node.
template <class Visit>
void for_each_node(const GaussLegendreRule& rule, double a, double b, Visit&& visit) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    visit(mid + half * rule.nodes[k], half * rule.weights[k]);
  }
}

template <class F>
double composite_gauss_legendre(F&& f, double a, double b, int panels,
                                const GaussLegendreRule& rule) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double hi = (i + 1 == panels) ? b : lo + h;
    double panel = 0.0;
    for_each_node(rule, lo, hi, [&](double x, double w) { panel += w * f(x); });
    total += panel;
  }
  return total;
}

inline bool refinement_converged(double coarse, double fine, double rel_tol, double abs_tol) {
  const double diff = std::abs(fine - coarse);
  return diff <= rel_tol * std::abs(fine) || diff <= abs_tol;
}

/// Doubles the panel count until two successive values agree to tolerance.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadSettings& settings = {}) {
  validate(settings);
  const GaussLegendreRule& rule = gauss_legendre_rule(settings.nodes);
  int panels = settings.panels;
  double coarse = composite_gauss_legendre(f, a, b, panels, rule);
  double achieved = std::numeric_limits<double>::infinity();
  while (panels * 2 <= settings.max_panels) {
    panels *= 2;
    const double fine = composite_gauss_legendre(f, a, b, panels, rule);
    if (refinement_converged(coarse, fine, settings.rel_tol, settings.abs_tol)) {
      return {fine, std::abs(fine - coarse), panels};
    }
    achieved = std::abs(fine - coarse) / std::abs(fine);
    coarse = fine;
  }
  throw QuadratureError("integrate: panel doubling did not converge", achieved);
}

}  // namespace dimtrunc
