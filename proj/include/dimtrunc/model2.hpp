#pragma once

// Model problem 2: -div(beta(y) grad w) = f with the spatially constant
// beta(y) = exp(sum_j b_j y_j), so that w(x, y) = w~(x) / beta(y) with
// -Laplace w~ = f. The truncation error factorizes into a scalar gap times
// ||w~||_{H^1}; on D = (0,1) w~ comes from the interval Green's function,
// other domains supply ||w~||_{H^1} directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dimtrunc/gaussian.hpp"
#include "dimtrunc/quadrature.hpp"
#include "dimtrunc/rates.hpp"
#include "dimtrunc/sequences.hpp"
#include "dimtrunc/source.hpp"

namespace dimtrunc {

enum class ReferenceDomain { UnitInterval, External };

/// The Poisson solution w~ (or just its H^1 norm for external domains).
class PoissonReference {
 public:
  ReferenceDomain domain() const { return domain_; }
  double h1_norm() const { return h1_norm_; }
  /// ||w~||_{L^2}; UnitInterval only.
  double l2_norm() const { return l2_norm_; }
  /// ||w~'||_{L^2}; UnitInterval only.
  double seminorm() const { return seminorm_; }
  const SourceTerm* source() const { return source_ ? &*source_ : nullptr; }

  /// w~(x) = (1-x) int_0^x xi f + x int_x^1 (1-xi) f.
  double value_at(double x) const {
    require_interval();
    if (value_poly_) return (*value_poly_)(x);
    return (1.0 - x) * left_moment(x) + x * right_moment(x);
  }

  /// w~'(x) = int_x^1 (1-xi) f - int_0^x xi f.
  double derivative_at(double x) const {
    require_interval();
    if (derivative_poly_) return (*derivative_poly_)(x);
    return right_moment(x) - left_moment(x);
  }

  static PoissonReference external(double h1_norm) {
    if (!(h1_norm > 0.0) || !std::isfinite(h1_norm)) {
      throw std::invalid_argument("PoissonReference: h1_norm must be positive and finite");
    }
    PoissonReference ref;
    ref.domain_ = ReferenceDomain::External;
    ref.h1_norm_ = h1_norm;
    return ref;
  }

  static PoissonReference unit_interval(const SourceTerm& source, QuadSettings settings = {}) {
    PoissonReference ref;
    ref.domain_ = ReferenceDomain::UnitInterval;
    ref.source_ = source;
    ref.settings_ = settings;
    double l2_sq = 0.0;
    double semi_sq = 0.0;
    if (const Polynomial* f = source.polynomial()) {
      const Polynomial x({0.0, 1.0});
      const Polynomial one_minus_x({1.0, -1.0});
      const Polynomial left = (x * (*f)).antiderivative();
      const Polynomial q = (one_minus_x * (*f)).antiderivative();
      const Polynomial right = Polynomial({q(1.0)}) - q;
      ref.value_poly_ = one_minus_x * left + x * right;
      ref.derivative_poly_ = right - left;
      l2_sq = ((*ref.value_poly_) * (*ref.value_poly_)).integral01();
      semi_sq = ((*ref.derivative_poly_) * (*ref.derivative_poly_)).integral01();
    } else {
      QuadSettings outer = settings;
      outer.abs_tol = std::max(outer.abs_tol, 1e-300);
      l2_sq = integrate([&](double t) { return std::pow(ref.value_at(t), 2); }, 0.0, 1.0, outer).value;
      semi_sq =
          integrate([&](double t) { return std::pow(ref.derivative_at(t), 2); }, 0.0, 1.0, outer)
              .value;
    }
    ref.l2_norm_ = std::sqrt(l2_sq);
    ref.seminorm_ = std::sqrt(semi_sq);
    ref.h1_norm_ = std::sqrt(l2_sq + semi_sq);
    if (!(ref.h1_norm_ > 0.0)) {
      throw std::invalid_argument("PoissonReference: ||w~||_{H^1} vanishes (zero source)");
    }
    return ref;
  }

 private:
  PoissonReference() = default;

  void require_interval() const {
    if (domain_ != ReferenceDomain::UnitInterval) {
      throw std::logic_error("PoissonReference: pointwise values need the built-in unit interval");
    }
  }

  QuadSettings inner_settings() const {
    QuadSettings inner = settings_;
    inner.panels = 2;
    inner.rel_tol = 1e-14;
    inner.abs_tol = 1e-16;
    return inner;
  }

  double left_moment(double x) const {
    if (x <= 0.0) return 0.0;
    return integrate([&](double xi) { return xi * source_->f(xi); }, 0.0, x, inner_settings()).value;
  }

  double right_moment(double x) const {
    if (x >= 1.0) return 0.0;
    return integrate([&](double xi) { return (1.0 - xi) * source_->f(xi); }, x, 1.0,
                     inner_settings())
        .value;
  }

  ReferenceDomain domain_ = ReferenceDomain::External;
  double h1_norm_ = 0.0;
  double l2_norm_ = 0.0;
  double seminorm_ = 0.0;
  std::optional<SourceTerm> source_;
  std::optional<Polynomial> value_poly_;
  std::optional<Polynomial> derivative_poly_;
  QuadSettings settings_;
};

/// Solves -w~'' = f on (0,1), w~(0) = w~(1) = 0.
inline PoissonReference poisson_1d(const SourceTerm& source, QuadSettings settings = {}) {
  return PoissonReference::unit_interval(source, settings);
}

class Model2Problem {
 public:
  Model2Problem(DecayProfile profile, PoissonReference reference)
      : profile_(std::move(profile)), reference_(std::move(reference)) {
    if (profile_.kind() != ProfileKind::Constant) {
      throw std::invalid_argument("Model2Problem: b_j must come from a Constant profile");
    }
  }

  const DecayProfile& profile() const { return profile_; }
  const PoissonReference& reference() const { return reference_; }

 private:
  DecayProfile profile_;
  PoissonReference reference_;
};

/// w_s(x, y) = w~(x) exp(-sum_{j<=s} b_j y_j), s = y.size().
inline double solution2_at(const Model2Problem& problem, std::span<const double> y, double x) {
  double exponent = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) exponent += problem.profile().sup_norm(j + 1) * y[j];
  return problem.reference().value_at(x) * std::exp(-exponent);
}

/// ||E[w - w_s]||_{H^1} = e^{head/2} (e^{tail/2} - 1) ||w~||_{H^1}; no spatial quadrature.
inline double h1_truncation_error2(const Model2Problem& problem, std::uint64_t s) {
  const DecayProfile& profile = problem.profile();
  return truncation_gap(head_sum_squared(profile, s), tail_sum_squared(profile, s)) *
         problem.reference().h1_norm();
}

/// s -> C2 s^{-2/p+1}, C2 = ||w~||_{H^1} e^{sum b_j^2 / 2} (sum b_j^p)^{2/p} / 2.
inline Envelope upper_envelope2(const Model2Problem& problem, double p, const TruncationGrid& grid) {
  const DecayProfile& profile = problem.profile();
  const double lp = lp_sum(profile, p).value();
  const double sq = tail_sum_squared(profile, 0);
  const double constant =
      problem.reference().h1_norm() * 0.5 * std::exp(0.5 * sq) * std::pow(lp, 2.0 / p);
  if (!std::isfinite(constant)) throw std::range_error("upper_envelope2: constant overflows");
  return make_envelope(constant, 1.0 - 2.0 / p, grid);
}

/// C_w~ = c^2 ||w~||_{H^1} / 2.
inline double lower_constant2(const Model2Problem& problem) {
  const double c = problem.profile().c();
  return 0.5 * c * c * problem.reference().h1_norm();
}

/// s -> (C / (2 theta - 1)) (s+1)^{-2 theta + 1}, C = C_w~.
inline Envelope lower_envelope2(const Model2Problem& problem, const TruncationGrid& grid,
                                LowerEnvelopeForm form = LowerEnvelopeForm::Proven) {
  const double theta = problem.profile().theta();
  return make_envelope(lower_constant2(problem) / (2.0 * theta - 1.0), 1.0 - 2.0 * theta, grid,
                       form == LowerEnvelopeForm::Proven);
}

inline ErrorCurve error_curve(const Model2Problem& problem, const TruncationGrid& grid) {
  std::vector<CurvePoint> points;
  points.reserve(grid.size());
  for (std::uint64_t s : grid) points.push_back({s, h1_truncation_error2(problem, s)});
  return ErrorCurve(std::move(points), "model2", CurveMethod::ClosedForm);
}

}  // namespace dimtrunc
