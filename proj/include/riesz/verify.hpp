#pragma once

// Oracles that confront the staircase sampler with the closed forms:
// Monte-Carlo Laplace transforms, first moments, chi-squared marginals,
// quadrature normalization of the density, and the block-by-block
// induction over the staircase.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "riesz/cone.hpp"
#include "riesz/distributions.hpp"
#include "riesz/errors.hpp"
#include "riesz/rng.hpp"
#include "riesz/sampler.hpp"
#include "riesz/stats.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz {

inline constexpr double kDefaultZMax = 4.0;

struct LaplaceEstimate {
  double mean;
  double std_error;
};

// Sample mean of exp(tr(theta X)) and its CLT standard error.
inline LaplaceEstimate empirical_laplace(const std::vector<SymMatrix>& xs, const SymMatrix& theta) {
  if (xs.empty()) throw ArgumentError("empty batch");
  std::vector<double> v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    v[i] = std::exp(trace_product(theta, xs[i]));
    if (!std::isfinite(v[i])) throw OverflowError(i);
  }
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  if (v.size() < 2) return {mean, 0.0};
  for (double& x : v) x = (x - mean) * (x - mean);
  const double var = pairwise_sum(v) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

inline LaplaceEstimate empirical_laplace(const SampleBatch& batch, const SymMatrix& theta) {
  return empirical_laplace(batch.matrices, theta);
}

struct LaplacePoint {
  SymMatrix theta;
  double empirical;
  double analytic;
  double std_error;
  double z_score;
  bool pass;
};

struct LaplaceCheckReport {
  std::vector<LaplacePoint> points;
  PowerExponent analytic_shape;
  double z_max;
  bool pass;
};

// Compares samples against the closed-form transform of `params` at every
// theta. All thetas are validated before any sample is touched.
inline LaplaceCheckReport laplace_check_samples(const std::vector<SymMatrix>& xs,
                                                const RieszParams& params,
                                                const std::vector<SymMatrix>& thetas, double z_max) {
  std::vector<double> analytic;
  analytic.reserve(thetas.size());
  for (const auto& th : thetas) analytic.push_back(riesz_laplace(params, th));
  LaplaceCheckReport report{{}, params.s(), z_max, true};
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const LaplaceEstimate est = empirical_laplace(xs, thetas[k]);
    const double diff = est.mean - analytic[k];
    double z;
    if (est.std_error > 0.0) {
      z = diff / est.std_error;
    } else {
      z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    const bool ok = std::abs(diff) <= z_max * est.std_error;
    report.points.push_back({thetas[k], est.mean, analytic[k], est.std_error, z, ok});
    report.pass = report.pass && ok;
  }
  return report;
}

// theta = -c I for each c.
inline std::vector<SymMatrix> scalar_theta_grid(Index r, const std::vector<double>& scalars) {
  std::vector<SymMatrix> out;
  for (double c : scalars) out.push_back(SymMatrix::scaled_identity(r, -c));
  return out;
}

inline const std::vector<double>& default_theta_scalars() {
  static const std::vector<double> v{0.25, 0.5, 1.0};
  return v;
}

// Random negative definite theta with trace(-theta) in [r/4, r], drawn from
// a stream reserved for this purpose.
inline SymMatrix random_negative_theta(Index r, std::uint64_t seed) {
  RngStream rng(seed, std::numeric_limits<std::uint64_t>::max());
  Eigen::MatrixXd b(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) b(i, j) = rng.normal();
  Eigen::MatrixXd m = b * b.transpose() / static_cast<double>(r) +
                      0.1 * Eigen::MatrixXd::Identity(r, r);
  const double u = 0.25 + 0.75 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  m *= u * static_cast<double>(r) / m.trace();
  return SymMatrix::symmetrize(-m);
}

// {-0.25 I, -0.5 I, -I} plus one random negative definite point.
inline std::vector<SymMatrix> default_theta_grid(Index r, std::uint64_t seed) {
  auto grid = scalar_theta_grid(r, default_theta_scalars());
  grid.push_back(random_negative_theta(r, seed));
  return grid;
}

struct LaplaceCheckOptions {
  double z_max = kDefaultZMax;
  unsigned workers = default_workers();
  // Replaces (s_1/2, ..., s_r/2) on the analytic side (negative controls).
  std::optional<PowerExponent> analytic_shape;
};

inline LaplaceCheckReport laplace_check(const StaircasePattern& pattern,
                                        const std::vector<SymMatrix>& thetas, std::size_t count,
                                        std::uint64_t seed, const LaplaceCheckOptions& opt = {}) {
  const Index r = pattern.order();
  const RieszParams params = validate_riesz(opt.analytic_shape.value_or(pattern.shape()),
                                            SymMatrix::scaled_identity(r, 0.5));
  for (const auto& th : thetas) riesz_log_laplace(params, th);
  const SampleBatch batch = sample_riesz_identity(pattern, count, seed, opt.workers);
  return laplace_check_samples(batch.matrices, params, thetas, opt.z_max);
}

struct MomentEntry {
  Index i;
  Index j;
  double mean;
  double expected;
  double std_error;
  double z_score;
  bool pass;
};

struct MomentReport {
  std::vector<MomentEntry> entries;
  double z_max;
  bool pass;
  std::string message;
};

// Entrywise sample means of X against E[X] (upper triangle).
inline MomentReport moment_check(const SampleBatch& batch, double z_max = kDefaultZMax) {
  MomentReport report{{}, z_max, true, {}};
  const std::size_t n = batch.matrices.size();
  if (n < 2) {
    report.pass = false;
    report.message = "insufficient samples";
    return report;
  }
  const Index r = batch.pattern.order();
  std::vector<double> v(n);
  for (Index i = 0; i < r; ++i) {
    for (Index j = i; j < r; ++j) {
      for (std::size_t k = 0; k < n; ++k) v[k] = batch.matrices[k](i, j);
      const double mean = pairwise_sum(v) / static_cast<double>(n);
      for (double& x : v) x = (x - mean) * (x - mean);
      const double se = std::sqrt(pairwise_sum(v) / static_cast<double>(n - 1) / static_cast<double>(n));
      const double expected = batch.expected_mean(i, j);
      const double diff = mean - expected;
      const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      const bool ok = std::abs(diff) <= z_max * se;
      report.entries.push_back({i + 1, j + 1, mean, expected, se, z, ok});
      report.pass = report.pass && ok;
    }
  }
  return report;
}

inline constexpr std::size_t kMinKsSamples = 1000;

// KS test of {X_ii} against chi-squared(s_i); index is 1-based.
inline stats::KsResult marginal_ks_check(const SampleBatch& batch, Index index) {
  const Index r = batch.pattern.order();
  if (index < 1 || index > r) {
    throw ArgumentError("marginal index " + std::to_string(index) + " outside [1, " +
                        std::to_string(r) + "]");
  }
  if (batch.matrices.size() < kMinKsSamples) {
    throw ArgumentError("marginal KS check needs at least 1000 samples");
  }
  std::vector<double> diag;
  diag.reserve(batch.matrices.size());
  for (const auto& x : batch.matrices) diag.push_back(x(index - 1, index - 1));
  const double dof = batch.pattern.counts()[static_cast<std::size_t>(index - 1)];
  return stats::ks_test(std::move(diag), [dof](double x) { return stats::chi_squared_cdf(x, dof); });
}

struct QuadratureReport {
  Index r;
  double integral;
  double abs_error_estimate;
  bool pass;
};

inline constexpr double kNormalizationTolerance = 1e-3;

inline bool normalization_passes(double integral, double err) {
  return std::abs(integral - 1.0) <= std::max(kNormalizationTolerance, 10.0 * err);
}

// |d(x11, x21, x22) / d(t11, t21, t22)| for x = t t^T at r = 2.
inline double cholesky_entry_jacobian_r2(double t11, double t22) { return 4.0 * t11 * t11 * t22; }

namespace detail {

template <int N>
std::vector<std::pair<double, double>> gauss_legendre_rule() {
  using rule = boost::math::quadrature::gauss<double, N>;
  std::vector<std::pair<double, double>> nodes;
  const auto& a = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      nodes.emplace_back(0.0, w[i]);
    } else {
      nodes.emplace_back(-a[i], w[i]);
      nodes.emplace_back(a[i], w[i]);
    }
  }
  return nodes;
}

// Composite Gauss-Legendre nodes/weights on [lo, hi] with `panels` panels.
inline std::vector<std::pair<double, double>> composite_rule(double lo, double hi, int panels) {
  static const auto base = gauss_legendre_rule<16>();
  std::vector<std::pair<double, double>> out;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (const auto& [x, w] : base) out.emplace_back(mid + 0.5 * h * x, 0.5 * h * w);
  }
  return out;
}

// Integral of the r = 2 density over the cone in Cholesky coordinates
// t11, t22 in (0, inf), t21 in R, each mapped by t = tan(v).
inline double integrate_density_r2(const RieszParams& params, int panels) {
  const double half_pi = 0.5 * std::numbers::pi;
  const auto pos = composite_rule(0.0, half_pi, panels);
  const auto full = composite_rule(-half_pi, half_pi, 2 * panels);
  const double log_factor = log_entrywise_measure_factor(2);
  std::vector<double> partial;
  partial.reserve(pos.size());
  for (const auto& [v1, w1] : pos) {
    const double t11 = std::tan(v1);
    const double sec1 = 1.0 + t11 * t11;
    double acc1 = 0.0;
    for (const auto& [v2, w2] : full) {
      const double t21 = std::tan(v2);
      const double sec2 = 1.0 + t21 * t21;
      double acc2 = 0.0;
      for (const auto& [v3, w3] : pos) {
        const double t22 = std::tan(v3);
        const double sec3 = 1.0 + t22 * t22;
        SymMatrix x(2);
        x.set(0, 0, t11 * t11);
        x.set(1, 0, t11 * t21);
        x.set(1, 1, t21 * t21 + t22 * t22);
        const double ld = riesz_log_density(params, x);
        if (ld == -std::numeric_limits<double>::infinity()) continue;
        acc2 += w3 * std::exp(ld + log_factor) * cholesky_entry_jacobian_r2(t11, t22) * sec3;
      }
      acc1 += w2 * acc2 * sec2;
    }
    partial.push_back(w1 * acc1 * sec1);
  }
  return pairwise_sum(partial);
}

}  // namespace detail

struct NormalizationOptions {
  int panels = 4;  // per half-line for r = 2; doubled for the error estimate
};

// Integrates the density over the cone; r <= 2 only.
inline QuadratureReport density_normalization(const RieszParams& params,
                                              const NormalizationOptions& opt = {}) {
  if (params.regularity() != Regularity::absolutely_continuous) {
    throw UnsupportedRegimeError("normalization needs an absolutely continuous law");
  }
  const Index r = params.order();
  if (r > 2) throw UnsupportedRegimeError("quadrature is limited to r <= 2");
  if (r == 1) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [&](double v) {
      const double x = std::tan(v);
      const double ld = riesz_log_density(params, SymMatrix::scaled_identity(1, x));
      if (ld == -std::numeric_limits<double>::infinity()) return 0.0;
      return std::exp(ld) * (1.0 + x * x);
    };
    double err = 0.0;
    const double integral = integrator.integrate(f, 0.0, 0.5 * std::numbers::pi, 1e-10, &err);
    return {r, integral, err, normalization_passes(integral, err)};
  }
  const double coarse = detail::integrate_density_r2(params, opt.panels);
  const double fine = detail::integrate_density_r2(params, 2 * opt.panels);
  const double err = std::abs(fine - coarse);
  return {r, fine, err, normalization_passes(fine, err)};
}

struct BlockLevel {
  std::size_t level;  // 1-based
  Index order;        // p_l
  LaplaceCheckReport report;
};

struct BlockRecursionReport {
  std::vector<BlockLevel> levels;
  bool pass;
  std::size_t failing_level;  // first failing level, 0 when none
  bool skipped;               // single-block pattern
};

// For each level l, U^{(l)} U^{(l)T} against R((s_1/2..s_{p_l}/2), I/2).
inline BlockRecursionReport block_recursion_check(const StaircasePattern& pattern,
                                                  std::size_t count, std::uint64_t seed,
                                                  const LaplaceCheckOptions& opt = {}) {
  BlockRecursionReport out{{}, true, 0, false};
  const std::size_t levels = pattern.block_count();
  if (levels < 2) {
    out.skipped = true;
    return out;
  }
  if (count < 1) throw ArgumentError("sample count must be at least 1");
  std::vector<std::vector<std::optional<SymMatrix>>> slots(levels, std::vector<std::optional<SymMatrix>>(count));
  parallel_for(0, count, opt.workers, [&](std::size_t k) {
    RngStream rng(seed, k);
    const Eigen::MatrixXd u = build_staircase_matrix(pattern, rng);
    for (std::size_t l = 1; l <= levels; ++l) {
      slots[l - 1][k].emplace(SymMatrix::gram(staircase_block(pattern, u, l)));
    }
  });
  const PowerExponent shape = opt.analytic_shape.value_or(pattern.shape());
  for (std::size_t l = 1; l <= levels; ++l) {
    const Index p = pattern.boundaries()[l - 1];
    std::vector<SymMatrix> xs;
    xs.reserve(count);
    for (auto& s : slots[l - 1]) xs.push_back(std::move(*s));
    const RieszParams params =
        validate_riesz(shape.head(static_cast<std::size_t>(p)), SymMatrix::scaled_identity(p, 0.5));
    auto report = laplace_check_samples(xs, params, scalar_theta_grid(p, default_theta_scalars()),
                                        opt.z_max);
    if (!report.pass && out.failing_level == 0) out.failing_level = l;
    out.pass = out.pass && report.pass;
    out.levels.push_back({l, p, std::move(report)});
  }
  return out;
}

}  // namespace riesz
