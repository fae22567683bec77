#pragma once

// Model problem 1: -(alpha v')' = f on (0,1), v(0) = 0, v'(1) = 0, with
// alpha(x, y) = exp(sum_j y_j psi_j(x)). The explicit solution is
//   v(x, y) = int_0^x F(xi) exp(-sum_j y_j psi_j(xi)) d xi,  F(x) = int_x^1 f.
// Taking expectations, E[v - v_s](x) = int_0^x F(xi) G_s(xi) d xi where
//   G_s(x) = exp(head_s(x)/2) (exp(tail_s(x)/2) - 1)
// with head/tail the squared psi sums up to / beyond s.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

#include "dimtrunc/gaussian.hpp"
#include "dimtrunc/quadrature.hpp"
#include "dimtrunc/rates.hpp"
#include "dimtrunc/sequences.hpp"
#include "dimtrunc/source.hpp"

namespace dimtrunc {

class Model1Problem {
 public:
  Model1Problem(DecayProfile profile, SourceTerm source, QuadSettings quad = {})
      : profile_(std::move(profile)), source_(std::move(source)), quad_(quad) {
    validate(quad_);
  }

  const DecayProfile& profile() const { return profile_; }
  const SourceTerm& source() const { return source_; }
  const QuadSettings& quad() const { return quad_; }

  /// Exact polynomial evaluation is possible (Constant profile, polynomial f).
  bool has_closed_form() const {
    return profile_.kind() == ProfileKind::Constant && source_.polynomial() != nullptr;
  }

 private:
  DecayProfile profile_;
  SourceTerm source_;
  QuadSettings quad_;
};

/// v_s(x, y) with s = y.size(), by composite Gauss-Legendre on [0, x].
inline double solution_at(const Model1Problem& problem, std::span<const double> y, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("solution_at: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  const DecayProfile& profile = problem.profile();
  double weighted = 0.0;  // sum_j y_j c j^-theta
  for (std::size_t j = 0; j < y.size(); ++j) weighted += y[j] * profile.sup_norm(j + 1);
  auto integrand = [&](double xi) {
    return problem.source().F(xi) * std::exp(-weighted * profile.modulation(xi));
  };
  return integrate(integrand, 0.0, x, problem.quad()).value;
}

namespace detail {

// x -> G_s(x) with the power sums computed once.
class GapFunction {
 public:
  GapFunction(const DecayProfile& profile, std::uint64_t s) : profile_(&profile) {
    const double c2 = profile.c() * profile.c();
    if (c2 == 0.0) return;
    head_ = c2 * power_head(2.0 * profile.theta(), s);
    tail_ = c2 * power_tail(2.0 * profile.theta(), s).value();
  }

  double operator()(double x) const {
    if (tail_ == 0.0) return 0.0;
    const double g = profile_->modulation(x);
    return truncation_gap(g * g * head_, g * g * tail_);
  }

  /// Spatially constant value (Constant profiles).
  double constant_value() const { return tail_ == 0.0 ? 0.0 : truncation_gap(head_, tail_); }

 private:
  const DecayProfile* profile_;
  double head_ = 0.0;
  double tail_ = 0.0;
};

}  // namespace detail

/// G_s(x) = E[alpha(x,.)^-1 - alpha_s(x,.)^-1].
inline double expected_gap_at(const Model1Problem& problem, std::uint64_t s, double x) {
  const DecayProfile& profile = problem.profile();
  return truncation_gap(head_sum_squared(profile, s, x), tail_sum_squared(profile, s, x));
}

/// E[v - v_s](x) = int_0^x F G_s.
inline double expected_error_at(const Model1Problem& problem, std::uint64_t s, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("expected_error_at: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  const detail::GapFunction gap(problem.profile(), s);
  QuadSettings settings = problem.quad();
  settings.abs_tol = std::max(settings.abs_tol, 1e-300);
  return integrate([&](double xi) { return problem.source().F(xi) * gap(xi); }, 0.0, x, settings)
      .value;
}

enum class ErrorMethod { Auto, ClosedForm, Quadrature };

/// ||E[v - v_s]||_{H^1} together with its two parts.
struct H1Error {
  double norm = 0.0;
  double seminorm = 0.0;  // ||E'||_{L^2}
  double l2 = 0.0;        // ||E||_{L^2}
  CurveMethod method = CurveMethod::ClosedForm;
  int panels = 0;
};

namespace detail {

inline H1Error h1_error_closed_form(const Model1Problem& problem, std::uint64_t s) {
  const Polynomial& F = *problem.source().upper_antiderivative_polynomial();
  const double gamma = GapFunction(problem.profile(), s).constant_value();
  const Polynomial E = F.antiderivative();
  H1Error out;
  out.seminorm = gamma * std::sqrt((F * F).integral01());
  out.l2 = gamma * std::sqrt((E * E).integral01());
  out.norm = std::hypot(out.seminorm, out.l2);
  out.method = CurveMethod::ClosedForm;
  return out;
}

inline H1Error h1_error_quadrature(const Model1Problem& problem, std::uint64_t s) {
  const QuadSettings& settings = problem.quad();
  const GaussLegendreRule& rule = gauss_legendre_rule(settings.nodes);
  const GapFunction gap(problem.profile(), s);
  const SourceTerm& source = problem.source();
  auto derivative = [&](double x) { return source.F(x) * gap(x); };

  // Returns (||E'||^2, ||E||^2) on `panels` uniform panels; E is accumulated
  // panel by panel and completed inside each panel with the same rule.
  auto level = [&](int panels) {
    const double h = 1.0 / panels;
    double semi_sq = 0.0;
    double l2_sq = 0.0;
    double e_left = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = h * i;
      const double b = (i + 1 == panels) ? 1.0 : a + h;
      double panel_integral = 0.0;
      for_each_node(rule, a, b, [&](double x, double w) {
        const double d = derivative(x);
        panel_integral += w * d;
        semi_sq += w * d * d;
        double partial = 0.0;
        for_each_node(rule, a, x, [&](double xi, double wi) { partial += wi * derivative(xi); });
        const double e = e_left + partial;
        l2_sq += w * e * e;
      });
      e_left += panel_integral;
    }
    return std::pair{semi_sq, l2_sq};
  };

  int panels = settings.panels;
  auto coarse = level(panels);
  double achieved = std::numeric_limits<double>::infinity();
  while (panels * 2 <= settings.max_panels) {
    panels *= 2;
    const auto fine = level(panels);
    const bool ok = refinement_converged(coarse.first, fine.first, settings.rel_tol, settings.abs_tol) &&
                    refinement_converged(coarse.second, fine.second, settings.rel_tol, settings.abs_tol);
    if (ok) {
      H1Error out;
      out.seminorm = std::sqrt(fine.first);
      out.l2 = std::sqrt(fine.second);
      out.norm = std::sqrt(fine.first + fine.second);
      out.method = CurveMethod::Quadrature;
      out.panels = panels;
      return out;
    }
    achieved = std::max(std::abs(fine.first - coarse.first) / std::abs(fine.first),
                        std::abs(fine.second - coarse.second) / std::abs(fine.second));
    coarse = fine;
  }
  throw QuadratureError("h1_truncation_error: panel doubling did not converge", achieved);
}

}  // namespace detail

/// ||E[v - v_s]||_{H^1(0,1)}, the exact truncation error (up to quadrature).
/// Auto uses the polynomial closed form when available.
inline H1Error h1_truncation_error(const Model1Problem& problem, std::uint64_t s,
                                   ErrorMethod method = ErrorMethod::Auto) {
  switch (method) {
    case ErrorMethod::ClosedForm:
      if (!problem.has_closed_form()) {
        throw std::invalid_argument(
            "h1_truncation_error: closed form needs a Constant profile and polynomial source");
      }
      return detail::h1_error_closed_form(problem, s);
    case ErrorMethod::Quadrature:
      return detail::h1_error_quadrature(problem, s);
    case ErrorMethod::Auto:
      break;
  }
  return problem.has_closed_form() ? detail::h1_error_closed_form(problem, s)
                                   : detail::h1_error_quadrature(problem, s);
}

/// s -> C1 s^{-2/p+1},
/// C1 = ||f||_{L^2} e^{sum_j ||psi_j||^2 / 2} (sum_j ||psi_j||^p)^{2/p} / sqrt(2).
inline Envelope upper_envelope(const Model1Problem& problem, double p, const TruncationGrid& grid) {
  const DecayProfile& profile = problem.profile();
  const double lp = lp_sum(profile, p).value();
  const double sq = profile.c() * profile.c() * power_tail(2.0 * profile.theta(), 0).value();
  const double constant = std::sqrt(problem.source().f_l2_sq()) * std::exp(0.5 * sq) *
                          std::pow(lp, 2.0 / p) / std::numbers::sqrt2;
  if (!std::isfinite(constant)) throw std::range_error("upper_envelope: constant overflows");
  return make_envelope(constant, 1.0 - 2.0 / p, grid);
}

inline Envelope upper_envelope(const Model1Problem& problem, const TruncationGrid& grid) {
  return upper_envelope(problem, problem.profile().p(), grid);
}

/// s -> (C_f / (2 theta - 1)) (s+1)^{-2 theta + 1}, C_f = (c_eff^2 / 2) ||F||_{L^2}.
inline Envelope lower_envelope(const Model1Problem& problem, const TruncationGrid& grid,
                               LowerEnvelopeForm form = LowerEnvelopeForm::Proven) {
  const DecayProfile& profile = problem.profile();
  const double c_eff = profile.lower_constant();
  const double c_f = 0.5 * c_eff * c_eff * std::sqrt(problem.source().F_l2_sq());
  const double theta = profile.theta();
  return make_envelope(c_f / (2.0 * theta - 1.0), 1.0 - 2.0 * theta, grid,
                       form == LowerEnvelopeForm::Proven);
}

/// The constant C_f multiplying the lower envelope before division by 2 theta - 1.
inline double lower_constant(const Model1Problem& problem) {
  const double c_eff = problem.profile().lower_constant();
  return 0.5 * c_eff * c_eff * std::sqrt(problem.source().F_l2_sq());
}

inline ErrorCurve error_curve(const Model1Problem& problem, const TruncationGrid& grid,
                              ErrorMethod method = ErrorMethod::Auto) {
  std::vector<CurvePoint> points;
  points.reserve(grid.size());
  CurveMethod used = CurveMethod::ClosedForm;
  for (std::uint64_t s : grid) {
    const H1Error e = h1_truncation_error(problem, s, method);
    used = e.method;
    points.push_back({s, e.norm});
  }
  return ErrorCurve(std::move(points), "model1", used);
}

}  // namespace dimtrunc
