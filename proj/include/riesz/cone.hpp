#pragma once

// Numerics on the cone of positive definite symmetric matrices: leading
// minors, Cholesky, generalized powers, the cone Gamma function, and the
// Gindikin-set decision procedures.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz {

inline constexpr double kConeRelativeTolerance = 1e-10;
inline constexpr double kXiSnapTolerance = 1e-12;
inline constexpr double kHalfIntegerTolerance = 1e-12;

// 1e-10 scaled by the largest diagonal entry, floored at the smallest
// normal double so it stays positive for the zero matrix.
inline double default_tolerance(const SymMatrix& x) {
  return std::max(kConeRelativeTolerance * x.max_abs_diagonal(),
                  std::numeric_limits<double>::min());
}

inline void check_block_index(const SymMatrix& x, Index k) {
  if (k < 1 || k > x.order()) {
    throw ArgumentError("block index " + std::to_string(k) + " outside [1, " +
                        std::to_string(x.order()) + "]");
  }
}

// Delta_k(x): determinant of the top-left k x k block (k is 1-based).
inline double principal_minor(const SymMatrix& x, Index k) {
  check_block_index(x, k);
  return x.dense().topLeftCorner(k, k).partialPivLu().determinant();
}

// P_k(x): the top-left k x k block as a matrix of order k.
inline SymMatrix project_k(const SymMatrix& x, Index k) {
  check_block_index(x, k);
  return SymMatrix::symmetrize(x.dense().topLeftCorner(k, k));
}

// Lower-triangular t with positive diagonal and t t^T = x. A pivot at or
// below tol raises NotPositiveDefiniteError with the 1-based index.
inline Eigen::MatrixXd cholesky_lower(const SymMatrix& x, double tol) {
  const Index r = x.order();
  const auto& a = x.dense();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(r, r);
  for (Index j = 0; j < r; ++j) {
    double pivot = a(j, j);
    for (Index k = 0; k < j; ++k) pivot -= t(j, k) * t(j, k);
    if (!(pivot > tol)) throw NotPositiveDefiniteError(static_cast<std::size_t>(j + 1), pivot);
    const double d = std::sqrt(pivot);
    t(j, j) = d;
    for (Index i = j + 1; i < r; ++i) {
      double v = a(i, j);
      for (Index k = 0; k < j; ++k) v -= t(i, k) * t(j, k);
      t(i, j) = v / d;
    }
  }
  return t;
}

inline Eigen::MatrixXd cholesky_lower(const SymMatrix& x) {
  return cholesky_lower(x, default_tolerance(x));
}

inline void check_exponent_length(const SymMatrix& x, const PowerExponent& s) {
  if (static_cast<Index>(s.size()) != x.order()) {
    throw ArgumentError("exponent length " + std::to_string(s.size()) +
                        " does not match matrix order " + std::to_string(x.order()));
  }
}

// log Delta_s(x) = sum_i 2 s_i log t_ii, t the Cholesky factor of x.
inline double log_generalized_power(const SymMatrix& x, const PowerExponent& s) {
  check_exponent_length(x, s);
  Eigen::MatrixXd t;
  try {
    t = cholesky_lower(x);
  } catch (const NotPositiveDefiniteError& e) {
    throw ConeMembershipError(e.index(),
                              "generalized power undefined: leading minor " +
                                  std::to_string(e.index()) + " is not positive");
  }
  double acc = 0.0;
  for (Index i = 0; i < x.order(); ++i) {
    acc += 2.0 * s[static_cast<std::size_t>(i)] * std::log(t(i, i));
  }
  return acc;
}

// Delta_s(x) = Delta_1^{s_1 - s_2} ... Delta_r^{s_r}.
inline double generalized_power(const SymMatrix& x, const PowerExponent& s) {
  return std::exp(log_generalized_power(x, s));
}

enum class ConeVerdict { interior, boundary, outside };

inline const char* to_string(ConeVerdict v) {
  switch (v) {
    case ConeVerdict::interior: return "interior";
    case ConeVerdict::boundary: return "boundary";
    case ConeVerdict::outside: return "outside";
  }
  return "?";
}

struct ConeMembership {
  ConeVerdict verdict;
  double min_leading_minor;
  double tolerance_used;
};

// Interior: every leading minor exceeds tol. Otherwise boundary when the
// smallest eigenvalue is at least -tol, else outside.
inline ConeMembership cone_classify(const SymMatrix& x, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("cone tolerance must be positive");
  double min_minor = std::numeric_limits<double>::infinity();
  bool all_above = true;
  for (Index k = 1; k <= x.order(); ++k) {
    const double m = principal_minor(x, k);
    min_minor = std::min(min_minor, m);
    if (!(m > tol)) all_above = false;
  }
  if (all_above) return {ConeVerdict::interior, min_minor, tol};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.dense(), Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  return {lambda_min >= -tol ? ConeVerdict::boundary : ConeVerdict::outside, min_minor, tol};
}

inline ConeMembership cone_classify(const SymMatrix& x) {
  return cone_classify(x, default_tolerance(x));
}

inline bool is_interior(const SymMatrix& x) {
  return cone_classify(x).verdict == ConeVerdict::interior;
}

// Dimension of the space of symmetric r x r matrices.
inline constexpr double symmetric_dimension(std::size_t r) {
  return static_cast<double>(r) * static_cast<double>(r + 1) / 2.0;
}

// log Gamma_Omega(s) = ((n - r)/2) log(2 pi) + sum_j log Gamma(s_j - (j-1)/2)
inline double log_gamma_omega(const PowerExponent& s) {
  const std::size_t r = s.size();
  if (r == 0) throw ArgumentError("empty exponent");
  double acc = 0.5 * (symmetric_dimension(r) - static_cast<double>(r)) *
               std::log(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < r; ++j) {
    const double arg = s[j] - 0.5 * static_cast<double>(j);
    if (!(arg > 0.0)) {
      throw DomainError("Gamma_Omega(s) needs s_" + std::to_string(j + 1) + " > " +
                        format_double(0.5 * static_cast<double>(j)));
    }
    acc += std::lgamma(arg);
  }
  return acc;
}

// Scalar Gindikin set {1/2, 1, ..., (r-1)/2} U ((r-1)/2, inf). p = 0 is
// excluded unless include_zero is set.
inline bool in_gindikin_lambda(double p, int r, bool include_zero = false) {
  if (r < 1) throw ArgumentError("r must be at least 1");
  const double half_rm1 = 0.5 * (r - 1);
  if (p > half_rm1) return true;
  const double twice = 2.0 * p;
  const double nearest = std::round(twice);
  if (std::abs(twice - nearest) > kHalfIntegerTolerance) return false;
  if (nearest == 0.0) return include_zero;
  return nearest >= 1.0 && nearest <= r - 1;
}

struct XiMembership {
  bool member = false;
  std::vector<double> witness;    // u_1..u_r (valid prefix when not a member)
  std::size_t failing_index = 0;  // 1-based, 0 when member
};

// One left-to-right pass of u_k = s_k - (1/2) sum_{j<k} eps(u_j).
inline XiMembership in_gindikin_xi(const PowerExponent& s) {
  XiMembership out;
  int positives = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    double u = s[k] - 0.5 * positives;
    if (u < 0.0 && u >= -kXiSnapTolerance) u = 0.0;
    out.witness.push_back(u);
    if (u < 0.0) {
      out.failing_index = k + 1;
      return out;
    }
    if (u > 0.0) ++positives;
  }
  out.member = true;
  return out;
}

struct PeirceBlocks {
  SymMatrix top_left;
  Eigen::MatrixXd bottom_left;
  SymMatrix bottom_right;
};

// Partition at row/column `split` (1 <= split < r).
inline PeirceBlocks peirce_blocks(const SymMatrix& x, Index split) {
  const Index r = x.order();
  if (split < 1 || split >= r) {
    throw ArgumentError("split " + std::to_string(split) + " outside [1, " +
                        std::to_string(r - 1) + "]");
  }
  const auto& a = x.dense();
  return {SymMatrix::symmetrize(a.topLeftCorner(split, split)),
          a.bottomLeftCorner(r - split, split),
          SymMatrix::symmetrize(a.bottomRightCorner(r - split, r - split))};
}

inline SymMatrix reassemble(const PeirceBlocks& b) {
  const Index k = b.top_left.order();
  const Index r = k + b.bottom_right.order();
  Eigen::MatrixXd m(r, r);
  m.topLeftCorner(k, k) = b.top_left.dense();
  m.bottomLeftCorner(r - k, k) = b.bottom_left;
  m.topRightCorner(k, r - k) = b.bottom_left.transpose();
  m.bottomRightCorner(r - k, r - k) = b.bottom_right.dense();
  return SymMatrix::symmetrize(m);
}

// Inverse of a positive definite matrix through Cholesky solves.
inline SymMatrix spd_inverse(const SymMatrix& x) {
  const Eigen::MatrixXd t = cholesky_lower(x);
  const auto lower = t.triangularView<Eigen::Lower>();
  Eigen::MatrixXd inv = lower.solve(Eigen::MatrixXd::Identity(x.order(), x.order()));
  inv = t.transpose().triangularView<Eigen::Upper>().solve(inv);
  return SymMatrix::symmetrize(inv);
}

}  // namespace riesz
