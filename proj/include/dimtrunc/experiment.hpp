#pragma once

// Experiment runner behind the command-line tool: flat key = value
// configuration, sweeps over s, oracle checks, CSV and SVG output.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimtrunc/expression.hpp"
#include "dimtrunc/gaussian.hpp"
#include "dimtrunc/model1.hpp"
#include "dimtrunc/model2.hpp"
#include "dimtrunc/rates.hpp"
#include "dimtrunc/sequences.hpp"
#include "dimtrunc/source.hpp"

namespace dimtrunc {

/// Configuration rejected at parse or validation stage. `key` names the
/// offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, std::string message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)), message_(std::move(message)) {}
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  std::string key_;
  std::string message_;
};

enum class ModelKind { Model1, Model2 };

struct OracleFlags {
  bool gauss_hermite = true;
  bool monte_carlo = true;
  bool properties = true;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 20240917;
  std::uint64_t mc_s = 3;
  double mc_x = 0.5;
  int gh_order = 40;
};

struct ExperimentConfig {
  ModelKind model = ModelKind::Model2;
  double c = 1.0;
  double theta = 1.5;
  double p = 0.8;
  std::string source = "one";        // one | poly:a0,a1,... | expr:<expression>
  std::string modulation;            // empty: Constant profile
  double g_min = 1.0;
  std::optional<double> wtilde_h1;   // Model2 external reference
  std::string method = "auto";       // Model1: auto | quadrature | closed_form
  std::vector<std::uint64_t> s_list; // explicit grid; overrides s_start/s_factor/s_count
  std::uint64_t s_start = 2;
  std::uint64_t s_factor = 2;
  std::uint64_t s_count = 10;
  OracleFlags oracles;
  std::string output_dir = "out";
  bool write_csv = true;
  bool write_svg = true;
};

namespace detail {

inline std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a real number, got '" + value + "'");
  }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (value.empty() || value[0] == '-') throw std::invalid_argument("");
    const unsigned long long v = std::stoull(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  // Allow 1e6-style integers.
  const double v = parse_double(key, value);
  if (v < 0 || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

inline bool parse_flag(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected on/off, got '" + value + "'");
}

}  // namespace detail

/// Applies one key = value setting. Unknown keys are rejected.
inline void apply_setting(ExperimentConfig& config, const std::string& raw_key, const std::string& raw_value) {
  std::string key = detail::trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = detail::trim(raw_value);
  using detail::parse_double;
  using detail::parse_flag;
  using detail::parse_uint;
  if (key == "model") {
    if (value == "model1" || value == "1") {
      config.model = ModelKind::Model1;
    } else if (value == "model2" || value == "2") {
      config.model = ModelKind::Model2;
    } else {
      throw ConfigError(key, "expected model1 or model2, got '" + value + "'");
    }
  } else if (key == "c") {
    config.c = parse_double(key, value);
  } else if (key == "theta") {
    config.theta = parse_double(key, value);
  } else if (key == "p") {
    config.p = parse_double(key, value);
  } else if (key == "source") {
    config.source = value;
  } else if (key == "modulation") {
    config.modulation = value;
  } else if (key == "g_min") {
    config.g_min = parse_double(key, value);
  } else if (key == "wtilde_h1") {
    config.wtilde_h1 = parse_double(key, value);
  } else if (key == "method") {
    config.method = value;
  } else if (key == "s_list") {
    config.s_list.clear();
    for (const auto& item : detail::split(value, ',')) config.s_list.push_back(parse_uint(key, item));
  } else if (key == "s_start") {
    config.s_start = parse_uint(key, value);
  } else if (key == "s_factor") {
    config.s_factor = parse_uint(key, value);
  } else if (key == "s_count") {
    config.s_count = parse_uint(key, value);
  } else if (key == "gauss_hermite" || key == "gh") {
    config.oracles.gauss_hermite = parse_flag(key, value);
  } else if (key == "monte_carlo" || key == "mc") {
    config.oracles.monte_carlo = parse_flag(key, value);
  } else if (key == "properties") {
    config.oracles.properties = parse_flag(key, value);
  } else if (key == "mc_samples") {
    config.oracles.mc_samples = parse_uint(key, value);
  } else if (key == "mc_seed") {
    config.oracles.mc_seed = parse_uint(key, value);
  } else if (key == "mc_s") {
    config.oracles.mc_s = parse_uint(key, value);
  } else if (key == "mc_x") {
    config.oracles.mc_x = parse_double(key, value);
  } else if (key == "gh_order") {
    config.oracles.gh_order = static_cast<int>(parse_uint(key, value));
  } else if (key == "out" || key == "output_dir") {
    config.output_dir = value;
  } else if (key == "format") {
    config.write_csv = false;
    config.write_svg = false;
    for (const auto& item : detail::split(value, ',')) {
      if (item == "csv") {
        config.write_csv = true;
      } else if (item == "svg") {
        config.write_svg = true;
      } else if (!item.empty()) {
        throw ConfigError(key, "unknown format '" + item + "'");
      }
    }
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

/// Parses `key = value` lines; '#' starts a comment.
inline void apply_config_text(ExperimentConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  apply_config_text(config, text);
  return config;
}

inline TruncationGrid truncation_grid(const ExperimentConfig& config) {
  if (!config.s_list.empty()) return config.s_list;
  TruncationGrid grid;
  std::uint64_t s = config.s_start;
  for (std::uint64_t k = 0; k < config.s_count; ++k) {
    grid.push_back(s);
    s *= config.s_factor;
  }
  return grid;
}

/// Checks every invariant; throws ConfigError naming the violated one.
inline void validate(const ExperimentConfig& config) {
  if (!(config.theta > 1.0)) throw ConfigError("theta", "theta must exceed 1 (divergent series)");
  if (!(config.p > 0.0 && config.p < 1.0)) throw ConfigError("p", "p must lie in (0, 1)");
  if (!(config.p * config.theta > 1.0)) {
    throw ConfigError("p", "p * theta must exceed 1 for the sequence to be p-summable");
  }
  if (!(config.c > 0.0)) throw ConfigError("c", "degenerate profile refused: c must be positive");
  if (!config.modulation.empty() && config.model == ModelKind::Model2) {
    throw ConfigError("modulation", "model2 needs a spatially constant b_j profile");
  }
  if (!config.modulation.empty() && !(config.g_min > 0.0 && config.g_min <= 1.0)) {
    throw ConfigError("g_min", "g_min must lie in (0, 1]");
  }
  if (config.wtilde_h1 && !(*config.wtilde_h1 > 0.0)) {
    throw ConfigError("wtilde_h1", "||w~||_{H^1} must be positive");
  }
  if (config.method != "auto" && config.method != "quadrature" && config.method != "closed_form") {
    throw ConfigError("method", "expected auto, quadrature or closed_form");
  }
  if (config.s_list.empty()) {
    if (config.s_start < 1) throw ConfigError("s_start", "must be positive");
    if (config.s_factor < 2) throw ConfigError("s_factor", "must be at least 2");
    if (config.s_count < 1) throw ConfigError("s_count", "must be positive");
    const double last = static_cast<double>(config.s_start) *
                        std::pow(static_cast<double>(config.s_factor), static_cast<double>(config.s_count - 1));
    if (last > 1e12) throw ConfigError("s_count", "grid exceeds 1e12");
  }
  const TruncationGrid grid = truncation_grid(config);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0) throw ConfigError("s_list", "s must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) throw ConfigError("s_list", "s must be strictly increasing");
  }
  if (config.oracles.monte_carlo) {
    if (config.oracles.mc_samples < 2) throw ConfigError("mc_samples", "need at least 2 samples");
    if (config.oracles.mc_s < 1) throw ConfigError("mc_s", "must be positive");
    if (!(config.oracles.mc_x >= 0.0 && config.oracles.mc_x <= 1.0)) {
      throw ConfigError("mc_x", "must lie in [0, 1]");
    }
  }
  if (config.oracles.gauss_hermite &&
      (config.oracles.gh_order < 1 || config.oracles.gh_order > kMaxGaussHermiteOrder)) {
    throw ConfigError("gh_order", "must lie in [1, 128]");
  }
  if (!config.write_csv && !config.write_svg) throw ConfigError("format", "no output format selected");
}

/// Canonical text of every setting, in fixed order.
inline std::string canonical_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out.precision(17);
  out << "model=" << (config.model == ModelKind::Model1 ? "model1" : "model2") << ";c=" << config.c
      << ";theta=" << config.theta << ";p=" << config.p << ";source=" << config.source
      << ";modulation=" << config.modulation << ";g_min=" << config.g_min << ";wtilde_h1="
      << (config.wtilde_h1 ? std::to_string(*config.wtilde_h1) : "") << ";method=" << config.method << ";s=";
  for (auto s : truncation_grid(config)) out << s << ",";
  const OracleFlags& o = config.oracles;
  out << ";gh=" << o.gauss_hermite << ";mc=" << o.monte_carlo << ";properties=" << o.properties
      << ";mc_samples=" << o.mc_samples << ";mc_seed=" << o.mc_seed << ";mc_s=" << o.mc_s
      << ";mc_x=" << o.mc_x << ";gh_order=" << o.gh_order;
  return out.str();
}

/// FNV-1a 64 of the canonical configuration text, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline SourceTerm make_source(const std::string& text) {
  if (text == "one") return SourceTerm::one();
  if (text.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    for (const auto& item : detail::split(text.substr(5), ',')) coeffs.push_back(detail::parse_double("source", item));
    if (coeffs.empty()) throw ConfigError("source", "polynomial needs coefficients");
    return SourceTerm::poly(coeffs);
  }
  if (text.rfind("expr:", 0) == 0) {
    try {
      const Expression expr = Expression::parse(text.substr(5));
      return SourceTerm::custom([expr](double x) { return expr(x); });
    } catch (const ExpressionError& e) {
      throw ConfigError("source", e.what());
    }
  }
  throw ConfigError("source", "expected one, poly:a0,a1,... or expr:<expression>");
}

inline DecayProfile make_profile(const ExperimentConfig& config) {
  try {
    if (config.modulation.empty()) return DecayProfile::constant(config.c, config.theta, config.p);
    const Expression g = Expression::parse(config.modulation);
    return DecayProfile::modulated(config.c, config.theta, config.p, [g](double x) { return g(x); },
                                   config.g_min);
  } catch (const ExpressionError& e) {
    throw ConfigError("modulation", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("profile", e.what());
  }
}

/// One row of oracle.csv.
struct OracleRow {
  std::string check;
  double parameter = 0.0;
  double closed_form = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<OracleRow> rows;
  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.pass; });
  }
};

inline constexpr double kGaussHermiteTolerance = 1e-12;
inline constexpr double kMonteCarloSigmas = 3.0;

/// Oracle suite: Gauss-Hermite vs closed form, Monte Carlo vs closed form,
/// and Stechkin / integral-comparison sweeps over the configured grid.
inline ValidationReport validate_oracles(const ExperimentConfig& config) {
  validate(config);
  ValidationReport report;
  const OracleFlags& o = config.oracles;
  const DecayProfile profile = make_profile(config);
  if (o.gauss_hermite) {
    for (double b : {0.0, 0.5, 1.0, 2.0}) {
      const double exact = lognormal_mean(b);
      const double gh = gauss_hermite_mean(b, o.gh_order);
      const double disc = std::abs(gh - exact) / exact;
      report.rows.push_back({"gauss_hermite_lognormal_mean", b, exact, gh, 0.0, disc,
                             kGaussHermiteTolerance, disc <= kGaussHermiteTolerance});
    }
    // E[alpha_s(x,.)^-1] as a product of one-dimensional Gauss-Hermite means.
    const double x = o.mc_x;
    double product = 1.0;
    for (std::uint64_t j = 1; j <= o.mc_s; ++j) product *= gauss_hermite_mean(-profile.at(j, x), o.gh_order);
    const double exact = truncated_inverse_mean(profile, x, o.mc_s);
    const double disc = std::abs(product - exact) / exact;
    report.rows.push_back({"gauss_hermite_truncated_mean", static_cast<double>(o.mc_s), exact, product, 0.0,
                           disc, kGaussHermiteTolerance, disc <= kGaussHermiteTolerance});
  }
  if (o.monte_carlo) {
    const double exact = truncated_inverse_mean(profile, o.mc_x, o.mc_s);
    const McEstimate mc = mc_mean_inverse_coefficient(profile, o.mc_x, o.mc_s, o.mc_samples, o.mc_seed);
    const double disc = std::abs(mc.mean - exact);
    report.rows.push_back({"monte_carlo_truncated_mean", static_cast<double>(o.mc_s), exact, mc.mean,
                           mc.std_error, disc, kMonteCarloSigmas * mc.std_error,
                           disc <= kMonteCarloSigmas * mc.std_error});
  }
  if (o.properties) {
    // Sweeps use the sup-norm sequence c j^-theta.
    const DecayProfile sup = DecayProfile::constant(config.c, config.theta, config.p);
    for (std::uint64_t s : truncation_grid(config)) {
      const double tail = tail_sum_squared(sup, s);
      const double bound = stechkin_bound(sup, s);
      report.rows.push_back({"stechkin_tail_bound", static_cast<double>(s), bound, tail, 0.0,
                             tail - bound, 0.0, tail <= bound});
      const double lower = config.c * config.c * tail_integral_lower(config.theta, s);
      report.rows.push_back({"tail_integral_comparison", static_cast<double>(s), lower, tail, 0.0,
                             lower - tail, 0.0, tail >= lower});
    }
  }
  return report;
}

struct RunResult {
  int exit_code = 0;
  BoundsReport bounds;
  ErrorCurve curve{{}, "empty", CurveMethod::ClosedForm};
  ValidationReport oracles;
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content,
                       std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  written.push_back(path);
}

inline std::string svg_plot(const BoundsReport& report, const std::string& title) {
  constexpr double kW = 640, kH = 480, kL = 70, kR = 20, kT = 40, kB = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : report.rows) {
    const double x = std::log10(static_cast<double>(r.s));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (double v : {r.lower, r.error, r.upper}) {
      if (v > 0) {
        ymin = std::min(ymin, std::log10(v));
        ymax = std::max(ymax, std::log10(v));
      }
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  auto px = [&](double lx) { return kL + (lx - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto py = [&](double ly) { return kT + (ymax - ly) / (ymax - ymin) * (kH - kT - kB); };
  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n"
      << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); ++e) {
    svg << "<line x1=\"" << kL << "\" x2=\"" << kW - kR << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
        << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << kL - 6 << "\" y=\"" << py(e) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << e << "</text>\n";
  }
  for (const auto& r : report.rows) {
    const double x = px(std::log10(static_cast<double>(r.s)));
    svg << "<text x=\"" << x << "\" y=\"" << kH - kB + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << r.s << "</text>\n";
  }
  svg << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">truncation dimension s</text>\n";
  struct Series {
    const char* name;
    const char* color;
    const char* dash;
    double BoundsRow::*field;
  };
  const Series series[] = {{"error", "#1f77b4", "", &BoundsRow::error},
                           {"upper envelope", "#d62728", "6,4", &BoundsRow::upper},
                           {"lower envelope", "#2ca02c", "6,4", &BoundsRow::lower}};
  int legend = 0;
  for (const auto& ser : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"2\"";
    if (*ser.dash) svg << " stroke-dasharray=\"" << ser.dash << "\"";
    svg << " points=\"";
    for (const auto& r : report.rows) {
      const double v = r.*(ser.field);
      if (v > 0) svg << px(std::log10(static_cast<double>(r.s))) << "," << py(std::log10(v)) << " ";
    }
    svg << "\"/>\n";
    const double ly = kT + 16 + 18 * legend++;
    svg << "<line x1=\"" << kW - kR - 150 << "\" x2=\"" << kW - kR - 125 << "\" y1=\"" << ly << "\" y2=\"" << ly
        << "\" stroke=\"" << ser.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kW - kR - 120 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << ser.name << "</text>\n";
  }
  for (const auto& r : report.rows) {
    svg << "<circle cx=\"" << px(std::log10(static_cast<double>(r.s))) << "\" cy=\"" << py(std::log10(r.error))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace detail

/// Runs the sweep and writes errors.csv, fit.csv, oracle.csv, convergence.svg.
/// Exit code 0 iff the sandwich certification and every enabled oracle pass.
inline RunResult run(const ExperimentConfig& config) {
  validate(config);
  const TruncationGrid grid = truncation_grid(config);
  const DecayProfile profile = make_profile(config);
  RunResult result;
  Envelope lower;
  Envelope upper;
  if (config.model == ModelKind::Model1) {
    const Model1Problem problem(profile, make_source(config.source));
    const ErrorMethod method = config.method == "quadrature"    ? ErrorMethod::Quadrature
                               : config.method == "closed_form" ? ErrorMethod::ClosedForm
                                                                : ErrorMethod::Auto;
    result.curve = error_curve(problem, grid, method);
    lower = lower_envelope(problem, grid);
    upper = upper_envelope(problem, config.p, grid);
  } else {
    const PoissonReference ref = config.wtilde_h1 ? PoissonReference::external(*config.wtilde_h1)
                                                  : poisson_1d(make_source(config.source));
    const Model2Problem problem(profile, ref);
    result.curve = error_curve(problem, grid);
    lower = lower_envelope2(problem, grid);
    upper = upper_envelope2(problem, config.p, grid);
  }
  result.bounds = certify_sandwich(result.curve, lower, upper);
  const bool any_oracle = config.oracles.gauss_hermite || config.oracles.monte_carlo || config.oracles.properties;
  if (any_oracle) result.oracles = validate_oracles(config);

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const std::string header = "# config_hash=" + config_hash(config) + "\n";
  if (config.write_csv) {
    std::ostringstream errors;
    errors << header << "s,error,lower,upper,lower_ok,upper_ok\n";
    for (const auto& r : result.bounds.rows) {
      errors << r.s << "," << format_number(r.error) << "," << format_number(r.lower) << ","
             << format_number(r.upper) << "," << (r.lower_ok ? "true" : "false") << ","
             << (r.upper_ok ? "true" : "false") << "\n";
    }
    detail::write_file(dir / "errors.csv", errors.str(), result.files);

    std::ostringstream fit;
    fit << header << "slope,intercept,r_squared,upper_rate,lower_rate,sharpness_gap,s_min,s_max\n";
    const auto& f = result.bounds.fit;
    fit << (f ? format_number(f->slope) : "") << "," << (f ? format_number(f->intercept) : "") << ","
        << (f ? format_number(f->r_squared) : "") << "," << format_number(upper.exponent) << ","
        << format_number(lower.exponent) << "," << format_number(sharpness_gap(config.theta, config.p)) << ","
        << (f ? std::to_string(f->s_min) : "") << "," << (f ? std::to_string(f->s_max) : "") << "\n";
    detail::write_file(dir / "fit.csv", fit.str(), result.files);

    if (any_oracle) {
      std::ostringstream oracle;
      oracle << header << "check,parameter,closed_form,estimate,std_error,discrepancy,tolerance,pass\n";
      for (const auto& r : result.oracles.rows) {
        oracle << r.check << "," << format_number(r.parameter) << "," << format_number(r.closed_form) << ","
               << format_number(r.estimate) << "," << format_number(r.std_error) << ","
               << format_number(r.discrepancy) << "," << format_number(r.tolerance) << ","
               << (r.pass ? "true" : "false") << "\n";
      }
      detail::write_file(dir / "oracle.csv", oracle.str(), result.files);
    }
  }
  if (config.write_svg) {
    const std::string title = std::string(config.model == ModelKind::Model1 ? "model 1" : "model 2") +
                              ": c=" + format_number(config.c) + ", theta=" + format_number(config.theta) +
                              ", p=" + format_number(config.p);
    detail::write_file(dir / "convergence.svg", detail::svg_plot(result.bounds, title), result.files);
  }
  result.exit_code = (result.bounds.pass() && result.oracles.pass()) ? 0 : 1;
  return result;
}

}  // namespace dimtrunc
