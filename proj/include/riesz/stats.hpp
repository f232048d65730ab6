#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "riesz/errors.hpp"

namespace riesz::stats {

inline double chi_squared_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw ArgumentError("chi-squared degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

// P(K > lambda) for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form of the CDF, fast for small lambda.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double scale = -pi2 / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(scale * m * m);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

struct KsResult {
  double statistic;
  double p_value;
};

// Two-sided one-sample KS test; the p-value uses the asymptotic law of
// sqrt(n) D.
inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ArgumentError("KS test needs at least one observation");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    const double di = static_cast<double>(i);
    d = std::max({d, f - di / n, (di + 1.0) / n - f});
  }
  return {d, kolmogorov_survival(std::sqrt(n) * d)};
}

}  // namespace riesz::stats
