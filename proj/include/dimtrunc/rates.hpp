#pragma once

// Error curves, log-log rate fits and lower/upper envelope certification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dimtrunc {

using TruncationGrid = std::vector<std::uint64_t>;

/// s -> constant * s^exponent, or constant * (s + 1)^exponent when `shifted`.
struct Envelope {
  double constant = 0.0;
  double exponent = 0.0;
  bool shifted = false;
  TruncationGrid s;
  std::vector<double> values;
};

inline Envelope make_envelope(double constant, double exponent, const TruncationGrid& grid,
                              bool shifted = false) {
  Envelope env{constant, exponent, shifted, grid, {}};
  env.values.reserve(grid.size());
  for (std::uint64_t s : grid) {
    if (s == 0) throw std::invalid_argument("envelope: truncation dimension must be positive");
    const double base = static_cast<double>(shifted ? s + 1 : s);
    env.values.push_back(constant * std::pow(base, exponent));
  }
  return env;
}

/// Proven: C (s+1)^{-2 theta + 1}, the integral comparison bound.
/// Asymptotic: C s^{-2 theta + 1}, which only holds once s is large enough.
enum class LowerEnvelopeForm { Proven, Asymptotic };

enum class CurveMethod { ClosedForm, Quadrature, MonteCarlo };

inline const char* to_string(CurveMethod m) {
  switch (m) {
    case CurveMethod::ClosedForm: return "closed_form";
    case CurveMethod::Quadrature: return "quadrature";
    case CurveMethod::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

struct CurvePoint {
  std::uint64_t s = 0;
  double error = 0.0;
};

/// (s, error) pairs with s strictly increasing and errors strictly positive.
class ErrorCurve {
 public:
  ErrorCurve(std::vector<CurvePoint> points, std::string label, CurveMethod method)
      : points_(std::move(points)), label_(std::move(label)), method_(method) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].s == 0) throw std::invalid_argument("ErrorCurve: s must be positive");
      if (i > 0 && points_[i].s <= points_[i - 1].s) {
        throw std::invalid_argument("ErrorCurve: s must be strictly increasing");
      }
      if (!(points_[i].error > 0.0) || !std::isfinite(points_[i].error)) {
        throw std::invalid_argument("ErrorCurve: errors must be finite and strictly positive (s = " +
                                    std::to_string(points_[i].s) + ")");
      }
    }
  }

  const std::vector<CurvePoint>& points() const { return points_; }
  const std::string& label() const { return label_; }
  CurveMethod method() const { return method_; }
  std::size_t size() const { return points_.size(); }

  TruncationGrid grid() const {
    TruncationGrid g;
    g.reserve(points_.size());
    for (const auto& p : points_) g.push_back(p.s);
    return g;
  }

 private:
  std::vector<CurvePoint> points_;
  std::string label_;
  CurveMethod method_;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::uint64_t s_min = 0;
  std::uint64_t s_max = 0;
  std::size_t n_points = 0;
};

/// Least squares for log(error) = intercept + slope * log(s) over points with s >= s_min.
inline RateFit fit_loglog(const ErrorCurve& curve, std::uint64_t s_min) {
  std::vector<std::pair<double, double>> xy;
  RateFit fit;
  for (const auto& p : curve.points()) {
    if (p.s < s_min) continue;
    if (xy.empty()) fit.s_min = p.s;
    fit.s_max = p.s;
    xy.emplace_back(std::log(static_cast<double>(p.s)), std::log(p.error));
  }
  if (xy.size() < 3) {
    throw std::invalid_argument("fit_loglog: need at least 3 points with s >= s_min");
  }
  const double n = static_cast<double>(xy.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  // A constant curve is fitted exactly.
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.n_points = xy.size();
  return fit;
}

/// Default asymptotic window: s >= max(s) / 16.
inline std::uint64_t default_fit_s_min(const ErrorCurve& curve) {
  return curve.points().empty() ? 1 : std::max<std::uint64_t>(1, curve.points().back().s / 16);
}

inline constexpr double kSandwichSlack = 1e-9;

struct BoundsRow {
  std::uint64_t s = 0;
  double lower = 0.0;
  double error = 0.0;
  double upper = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
};

struct BoundsReport {
  std::vector<BoundsRow> rows;
  double upper_constant = 0.0;
  double lower_constant = 0.0;
  double upper_rate = 0.0;
  double lower_rate = 0.0;
  std::optional<RateFit> fit;

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const BoundsRow& r) { return r.lower_ok && r.upper_ok; });
  }
};

/// Flags error >= lower (1 - tol) and error <= upper (1 + tol) on a shared grid.
inline BoundsReport certify_sandwich(const ErrorCurve& curve, const Envelope& lower,
                                     const Envelope& upper, double tol = kSandwichSlack) {
  const TruncationGrid grid = curve.grid();
  if (lower.s != grid || upper.s != grid || lower.values.size() != grid.size() ||
      upper.values.size() != grid.size()) {
    throw std::invalid_argument("certify_sandwich: curves do not share the same s grid");
  }
  BoundsReport report;
  report.upper_constant = upper.constant;
  report.lower_constant = lower.constant;
  report.upper_rate = upper.exponent;
  report.lower_rate = lower.exponent;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    BoundsRow row;
    row.s = grid[i];
    row.lower = lower.values[i];
    row.error = curve.points()[i].error;
    row.upper = upper.values[i];
    row.lower_ok = row.error >= row.lower * (1.0 - tol);
    row.upper_ok = row.error <= row.upper * (1.0 + tol);
    report.rows.push_back(row);
  }
  const std::uint64_t s_min = default_fit_s_min(curve);
  const auto in_window = std::count_if(curve.points().begin(), curve.points().end(),
                                       [&](const CurvePoint& p) { return p.s >= s_min; });
  if (in_window >= 3) report.fit = fit_loglog(curve, s_min);
  return report;
}

/// (2/p - 1) - (2 theta - 1): zero when upper and lower rates coincide,
/// negative when the upper envelope decays slower than the lower one.
inline double sharpness_gap(double theta, double p) { return 2.0 * (1.0 / p - theta); }

}  // namespace dimtrunc
