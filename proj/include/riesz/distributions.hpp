#pragma once

// Wishart and Riesz distributions on positive definite matrices: parameter
// validation, log densities, and log Laplace transforms.
//
// Densities are taken with respect to the Lebesgue measure of the Euclidean
// structure <a, b> = tr(ab), whose orthonormal basis uses off-diagonal
// elements (E_ij + E_ji)/sqrt(2). That measure is 2^{(n-r)/2} times the
// plain product measure over the upper-triangle entries; see
// log_entrywise_measure_factor.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "riesz/cone.hpp"
#include "riesz/errors.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz {

enum class Regularity { absolutely_continuous, singular };

inline const char* to_string(Regularity r) {
  return r == Regularity::absolutely_continuous ? "absolutely_continuous" : "singular";
}

// True when s_i > (i-1)/2 for every i.
inline bool is_absolutely_continuous(const PowerExponent& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.5 * static_cast<double>(i) + kXiSnapTolerance)) return false;
  }
  return true;
}

// Validated (s, sigma) of R_r(s, sigma), natural convention:
// density proportional to exp(-tr(sigma x)) Delta_{s-(r+1)/2}(x).
class RieszParams {
 public:
  const PowerExponent& s() const noexcept { return s_; }
  const SymMatrix& sigma() const noexcept { return sigma_; }
  Regularity regularity() const noexcept { return regularity_; }
  Index order() const noexcept { return sigma_.order(); }
  const std::vector<double>& xi_witness() const noexcept { return witness_; }

  // log Delta_s(sigma^{-1})
  double log_power_sigma_inverse() const noexcept { return log_power_sigma_inv_; }

 private:
  RieszParams(PowerExponent s, SymMatrix sigma, Regularity reg, std::vector<double> witness,
              double log_power_sigma_inv)
      : s_(std::move(s)),
        sigma_(std::move(sigma)),
        regularity_(reg),
        witness_(std::move(witness)),
        log_power_sigma_inv_(log_power_sigma_inv) {}

  friend RieszParams validate_riesz(const PowerExponent&, const SymMatrix&);

  PowerExponent s_;
  SymMatrix sigma_;
  Regularity regularity_;
  std::vector<double> witness_;
  double log_power_sigma_inv_;
};

inline RieszParams validate_riesz(const PowerExponent& s, const SymMatrix& sigma) {
  check_exponent_length(sigma, s);
  const XiMembership xi = in_gindikin_xi(s);
  if (!xi.member) throw InvalidShapeError(xi.failing_index);
  if (cone_classify(sigma).verdict != ConeVerdict::interior) {
    throw InvalidScaleError("sigma is not positive definite");
  }
  const double lp = log_generalized_power(spd_inverse(sigma), s);
  const Regularity reg =
      is_absolutely_continuous(s) ? Regularity::absolutely_continuous : Regularity::singular;
  return RieszParams(s, sigma, reg, xi.witness, lp);
}

// ((n - r)/2) log 2: add to a trace-measure log density to obtain the log
// density against d x_11 d x_12 ... d x_rr (upper-triangle entries).
inline double log_entrywise_measure_factor(Index r) {
  const auto rr = static_cast<std::size_t>(r);
  return 0.5 * (symmetric_dimension(rr) - static_cast<double>(rr)) * std::numbers::ln2;
}

// Returns -infinity outside the open cone.
inline double riesz_log_density(const RieszParams& params, const SymMatrix& x) {
  if (params.regularity() != Regularity::absolutely_continuous) {
    throw UnsupportedRegimeError("density of a singular Riesz distribution is not available");
  }
  const Index r = params.order();
  if (x.order() != r) throw ArgumentError("point has the wrong order");
  double log_power_x;
  try {
    log_power_x = log_generalized_power(x, params.s().shifted(-0.5 * static_cast<double>(r + 1)));
  } catch (const ConeMembershipError&) {
    return -std::numeric_limits<double>::infinity();
  }
  return -log_gamma_omega(params.s()) - params.log_power_sigma_inverse() -
         trace_product(params.sigma(), x) + log_power_x;
}

inline double riesz_density(const RieszParams& params, const SymMatrix& x) {
  return std::exp(riesz_log_density(params, x));
}

// log L(theta) = log Delta_s((sigma - theta)^{-1}) - log Delta_s(sigma^{-1}),
// defined for sigma - theta positive definite. Valid in both regimes.
inline double riesz_log_laplace(const RieszParams& params, const SymMatrix& theta) {
  if (theta.order() != params.order()) throw ArgumentError("theta has the wrong order");
  const SymMatrix shifted = params.sigma() - theta;
  if (cone_classify(shifted).verdict != ConeVerdict::interior) {
    throw OutOfDomainError("sigma - theta is not positive definite");
  }
  return log_generalized_power(spd_inverse(shifted), params.s()) -
         params.log_power_sigma_inverse();
}

inline double riesz_laplace(const RieszParams& params, const SymMatrix& theta) {
  return std::exp(riesz_log_laplace(params, theta));
}

enum class WishartConvention {
  // density proportional to exp(-tr(x scale^{-1})); Laplace Delta^{-p}(e - scale theta)
  rate_sigma_inverse,
  // R_r((p,...,p), scale): density proportional to exp(-tr(scale x))
  natural,
};

inline const char* to_string(WishartConvention c) {
  return c == WishartConvention::natural ? "natural" : "rate_sigma_inverse";
}

struct WishartParams {
  double p;
  SymMatrix scale;
  WishartConvention convention;
};

inline WishartParams make_wishart(double p, const SymMatrix& scale, WishartConvention convention,
                                  bool include_zero = false) {
  if (!in_gindikin_lambda(p, static_cast<int>(scale.order()), include_zero)) {
    throw InvalidShapeError(1);
  }
  if (cone_classify(scale).verdict != ConeVerdict::interior) {
    throw InvalidScaleError("Wishart scale is not positive definite");
  }
  return {p, scale, convention};
}

// rate(sigma) <-> natural(sigma^{-1}); shape unchanged.
inline WishartParams convert_convention(const WishartParams& w) {
  const WishartConvention other = w.convention == WishartConvention::natural
                                      ? WishartConvention::rate_sigma_inverse
                                      : WishartConvention::natural;
  return {w.p, spd_inverse(w.scale), other};
}

namespace detail {

// log det of a general square matrix whose determinant must be positive.
inline double log_positive_determinant(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double acc = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = packed(i, i);
    if (d < 0) sign = -sign;
    acc += std::log(std::abs(d));
  }
  if (sign < 0 || !std::isfinite(acc)) throw OutOfDomainError("determinant is not positive");
  return acc;
}

}  // namespace detail

inline double wishart_log_laplace(const WishartParams& w, const SymMatrix& theta) {
  if (theta.order() != w.scale.order()) throw ArgumentError("theta has the wrong order");
  if (w.convention == WishartConvention::natural) {
    const RieszParams rp =
        validate_riesz(PowerExponent::constant(static_cast<std::size_t>(w.scale.order()), w.p),
                       w.scale);
    return riesz_log_laplace(rp, theta);
  }
  if (cone_classify(spd_inverse(w.scale) - theta).verdict != ConeVerdict::interior) {
    throw OutOfDomainError("sigma^{-1} - theta is not positive definite");
  }
  const Index r = w.scale.order();
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(r, r) - w.scale.dense() * theta.dense();
  return -w.p * detail::log_positive_determinant(m);
}

// Closed-form Wishart log density (trace measure), p > (r-1)/2 only.
inline double wishart_log_density(const WishartParams& w, const SymMatrix& x) {
  const Index r = w.scale.order();
  if (x.order() != r) throw ArgumentError("point has the wrong order");
  if (!(w.p > 0.5 * static_cast<double>(r - 1))) {
    throw UnsupportedRegimeError("Wishart shape at or below (r-1)/2 has no density");
  }
  const WishartParams rate =
      w.convention == WishartConvention::rate_sigma_inverse ? w : convert_convention(w);
  if (cone_classify(x).verdict != ConeVerdict::interior) {
    return -std::numeric_limits<double>::infinity();
  }
  const auto rr = static_cast<std::size_t>(r);
  const double log_det_sigma = detail::log_positive_determinant(rate.scale.dense());
  const double log_det_x = detail::log_positive_determinant(x.dense());
  const SymMatrix sigma_inv = spd_inverse(rate.scale);
  return -w.p * log_det_sigma - log_gamma_omega(PowerExponent::constant(rr, w.p)) -
         trace_product(x, sigma_inv) + (w.p - 0.5 * static_cast<double>(r + 1)) * log_det_x;
}

// Constant shape vectors give Wishart laws (natural convention).
inline std::optional<WishartParams> riesz_is_wishart(const RieszParams& params,
                                                     bool include_zero = false) {
  const auto& v = params.s().values();
  for (double x : v) {
    if (x != v.front()) return std::nullopt;
  }
  if (!in_gindikin_lambda(v.front(), static_cast<int>(v.size()), include_zero)) {
    return std::nullopt;
  }
  return WishartParams{v.front(), params.sigma(), WishartConvention::natural};
}

}  // namespace riesz
