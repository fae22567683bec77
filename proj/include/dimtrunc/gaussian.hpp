#pragma once

// Gaussian expectation identities and two independent oracles for them:
// Gauss-Hermite quadrature (probabilists' weight) and seeded Monte Carlo.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dimtrunc/sequences.hpp"

namespace dimtrunc {

inline constexpr double kMaxLognormalArgument = 37.0;
inline constexpr double kMaxGapExponentSum = 1400.0;

/// E[exp(b Y)] = exp(b^2 / 2) for Y ~ N(0,1).
inline double lognormal_mean(double b) {
  if (!(std::abs(b) <= kMaxLognormalArgument)) {
    throw std::range_error("lognormal_mean: |b| exceeds 37, exp(b^2/2) overflows");
  }
  return std::exp(0.5 * b * b);
}

/// exp(head/2) * (exp(tail/2) - 1), the pointwise expected gap between the
/// full and truncated inverse lognormal coefficient.
inline double truncation_gap(double head, double tail) {
  if (!(head >= 0.0) || !(tail >= 0.0)) {
    throw std::invalid_argument("truncation_gap: head and tail sums must be nonnegative");
  }
  if (!(head + tail <= kMaxGapExponentSum)) {
    throw std::range_error("truncation_gap: head + tail exceeds 1400");
  }
  return std::exp(0.5 * head) * std::expm1(0.5 * tail);
}

/// Nodes and weights for E[h(Y)], Y ~ N(0,1). Weights sum to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

inline constexpr int kMaxGaussHermiteOrder = 128;

namespace detail {

// Orthonormal probabilists' Hermite recurrence; returns (p_n(x), p_{n-1}(x))
// and accumulates sum_{k<n} p_k(x)^2.
struct HermiteEval {
  double pn;
  double pn1;
  double sum_sq;
};

inline HermiteEval hermite_orthonormal(int n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sum_sq += cur * cur;
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = cur;
    cur = next;
  }
  return {cur, prev, sum_sq};
}

inline GaussHermiteRule build_gauss_hermite(int order) {
  const auto n = static_cast<Eigen::Index>(order);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) sub(k) = std::sqrt(static_cast<double>(k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_rule: eigenvalue iteration failed");
  }

  GaussHermiteRule rule;
  rule.order = order;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(i);
    // p_n'(x) = sqrt(n) p_{n-1}(x)
    for (int it = 0; it < 8; ++it) {
      const HermiteEval e = hermite_orthonormal(order, x);
      const double dx = e.pn / (std::sqrt(static_cast<double>(order)) * e.pn1);
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());
  for (int i = 0; i < order / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    const double half = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    rule.nodes[lo] = -half;
    rule.nodes[hi] = half;
  }
  if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;

  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.weights[i] = 1.0 / hermite_orthonormal(order, rule.nodes[i]).sum_sq;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  for (int i = 0; i < order / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    const double avg = 0.5 * (rule.weights[lo] + rule.weights[hi]);
    rule.weights[lo] = avg;
    rule.weights[hi] = avg;
  }
  return rule;
}

}  // namespace detail

/// Cached, immutable rule of the given order (1..128). Thread-safe.
inline const GaussHermiteRule& gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxGaussHermiteOrder) {
    throw std::out_of_range("gauss_hermite_rule: order must lie in [1, 128]");
  }
  static std::array<std::once_flag, kMaxGaussHermiteOrder + 1> flags;
  static std::array<GaussHermiteRule, kMaxGaussHermiteOrder + 1> rules;
  const auto idx = static_cast<std::size_t>(order);
  std::call_once(flags[idx], [&] { rules[idx] = detail::build_gauss_hermite(order); });
  return rules[idx];
}

/// sum_k w_k exp(b x_k): quadrature estimate of E[exp(b Y)].
inline double gauss_hermite_mean(double b, int order) {
  const GaussHermiteRule& rule = gauss_hermite_rule(order);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * std::exp(b * rule.nodes[k]);
  }
  return sum;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 1u << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  return splitmix64(splitmix64(seed) ^ splitmix64(chunk + 0x632BE59BD9B4E019ULL));
}

struct RunningMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double n_a = static_cast<double>(count);
    const double n_b = static_cast<double>(other.count);
    const double n = n_a + n_b;
    const double delta = other.mean - mean;
    if (delta != 0.0) mean += delta * (n_b / n);
    m2 += other.m2 + delta * delta * (n_a * n_b / n);
    count += other.count;
  }
};

}  // namespace detail

/// Monte Carlo estimate of E[exp(-sum_{j<=s} y_j psi_j(x))] with y_j iid N(0,1).
/// Bit-identical for a fixed (seed, n_samples, chunk_size), whatever the thread count.
inline McEstimate mc_mean_inverse_coefficient(const DecayProfile& profile, double x,
                                              std::uint64_t s, const McOptions& options) {
  if (s == 0) throw std::invalid_argument("mc_mean_inverse_coefficient: s must be positive");
  if (options.n_samples < 2) {
    throw std::invalid_argument("mc_mean_inverse_coefficient: need at least 2 samples");
  }
  if (options.chunk_size == 0) {
    throw std::invalid_argument("mc_mean_inverse_coefficient: chunk_size must be positive");
  }
  std::vector<double> psi(static_cast<std::size_t>(s));
  for (std::uint64_t j = 1; j <= s; ++j) psi[static_cast<std::size_t>(j - 1)] = profile.at(j, x);

  const std::uint64_t n_chunks = (options.n_samples + options.chunk_size - 1) / options.chunk_size;
  std::vector<detail::RunningMoments> partial(static_cast<std::size_t>(n_chunks));

  auto run_chunk = [&](std::uint64_t chunk) {
    const std::uint64_t begin = chunk * options.chunk_size;
    const std::uint64_t end = std::min(options.n_samples, begin + options.chunk_size);
    std::mt19937_64 engine(detail::chunk_seed(options.seed, chunk));
    std::normal_distribution<double> normal(0.0, 1.0);
    detail::RunningMoments moments;
    for (std::uint64_t i = begin; i < end; ++i) {
      double exponent = 0.0;
      for (double v : psi) exponent += normal(engine) * v;
      moments.push(std::exp(-exponent));
    }
    partial[static_cast<std::size_t>(chunk)] = moments;
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));
  if (threads == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::future<void>> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&, t] {
        for (std::uint64_t c = t; c < n_chunks; c += threads) run_chunk(c);
      }));
    }
    for (auto& w : workers) w.get();
  }

  detail::RunningMoments total;
  for (const auto& m : partial) total.merge(m);
  const double n = static_cast<double>(total.count);
  const double variance = total.m2 / (n - 1.0);
  return {total.mean, std::sqrt(variance / n), total.count, options.seed};
}

inline McEstimate mc_mean_inverse_coefficient(const DecayProfile& profile, double x,
                                              std::uint64_t s, std::uint64_t n_samples,
                                              std::uint64_t seed) {
  McOptions options;
  options.n_samples = n_samples;
  options.seed = seed;
  return mc_mean_inverse_coefficient(profile, x, s, options);
}

/// Closed-form target of the Monte Carlo estimator: exp(sum_{j<=s} psi_j(x)^2 / 2).
inline double truncated_inverse_mean(const DecayProfile& profile, double x, std::uint64_t s) {
  return std::exp(0.5 * head_sum_squared(profile, s, x));
}

}  // namespace dimtrunc
