#pragma once

// Source terms f on (0,1) and their upper antiderivative F(x) = int_x^1 f.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dimtrunc/quadrature.hpp"

namespace dimtrunc {

/// Dense polynomial, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
  }

  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const {
    std::vector<double> out(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k + 1] = coeffs_[k] / (k + 1.0);
    return Polynomial(std::move(out));
  }

  double integral01() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) sum += coeffs_[k] / (k + 1.0);
    return sum;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> out = a.coeffs_;
    for (double& c : out) c *= s;
    return Polynomial(std::move(out));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(out));
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  }

  std::vector<double> coeffs_;
};

enum class SourceKind { One, Poly, Custom };

class SourceTerm {
 public:
  using Function = std::function<double(double)>;

  static SourceTerm one() { return SourceTerm(SourceKind::One, Polynomial({1.0})); }

  static SourceTerm poly(std::vector<double> coefficients) {
    return SourceTerm(SourceKind::Poly, Polynomial(std::move(coefficients)));
  }

  /// `upper_antiderivative`, when given, must equal int_x^1 f.
  static SourceTerm custom(Function f, Function upper_antiderivative = {},
                           QuadSettings settings = {}) {
    if (!f) throw std::invalid_argument("SourceTerm: custom source function is empty");
    SourceTerm source;
    source.kind_ = SourceKind::Custom;
    source.f_ = std::move(f);
    source.exact_F_ = std::move(upper_antiderivative);
    source.settings_ = settings;
    source.finish();
    return source;
  }

  SourceKind kind() const { return kind_; }

  /// Present for One and Poly sources.
  const Polynomial* polynomial() const { return poly_ ? &*poly_ : nullptr; }
  /// F as a polynomial, for One and Poly sources.
  const Polynomial* upper_antiderivative_polynomial() const { return F_poly_ ? &*F_poly_ : nullptr; }

  double f(double x) const { return poly_ ? (*poly_)(x) : f_(x); }

  /// F(x) = int_x^1 f(z) dz.
  double F(double x) const {
    if (F_poly_) return (*F_poly_)(x);
    if (exact_F_) return exact_F_(x);
    if (x >= 1.0) return 0.0;
    QuadSettings inner = settings_;
    inner.panels = 2;
    inner.rel_tol = 1e-14;
    inner.abs_tol = 1e-15 * f_scale_;
    return integrate(f_, x, 1.0, inner).value;
  }

  /// ||f||_{L^2(0,1)}^2
  double f_l2_sq() const { return f_l2_sq_; }
  /// int_0^1 F(x)^2 dx
  double F_l2_sq() const { return F_l2_sq_; }

  const QuadSettings& quad_settings() const { return settings_; }

 private:
  SourceTerm() = default;

  SourceTerm(SourceKind kind, Polynomial p) : kind_(kind), poly_(std::move(p)) {
    const Polynomial antiderivative = poly_->antiderivative();
    F_poly_ = Polynomial({antiderivative(1.0)}) - antiderivative;
    f_l2_sq_ = ((*poly_) * (*poly_)).integral01();
    F_l2_sq_ = ((*F_poly_) * (*F_poly_)).integral01();
  }

  void finish() {
    QuadSettings settings = settings_;
    settings.rel_tol = std::min(settings.rel_tol, 1e-13);
    f_scale_ = integrate([this](double x) { return std::abs(f_(x)); }, 0.0, 1.0, settings).value;
    f_l2_sq_ = integrate([this](double x) { return f_(x) * f_(x); }, 0.0, 1.0, settings).value;
    settings.abs_tol = 1e-30;
    F_l2_sq_ = integrate(
                   [this](double x) {
                     const double v = F(x);
                     return v * v;
                   },
                   0.0, 1.0, settings)
                   .value;
  }

  SourceKind kind_ = SourceKind::Custom;
  std::optional<Polynomial> poly_;
  std::optional<Polynomial> F_poly_;
  Function f_;
  Function exact_F_;
  QuadSettings settings_;
  double f_scale_ = 1.0;
  double f_l2_sq_ = 0.0;
  double F_l2_sq_ = 0.0;
};

}  // namespace dimtrunc
