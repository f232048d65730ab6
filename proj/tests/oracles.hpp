#pragma once

// Test-only reference computations. Nothing here calls the Cholesky or LU
// paths of the library.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "riesz/sym_matrix.hpp"

namespace oracle {

// Determinant by cofactor expansion along the first row, in long double so
// that cancellation stays below the error of the routes under test.
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

inline long double cofactor_det_ld(const LMatrix& a) {
  const auto n = a.rows();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  long double det = 0.0L;
  for (Eigen::Index j = 0; j < n; ++j) {
    LMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index c2 = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, c2++) = a(r, c);
      }
    }
    det += ((j % 2) ? -1.0L : 1.0L) * a(0, j) * cofactor_det_ld(minor);
  }
  return det;
}

inline double cofactor_det(const Eigen::MatrixXd& a) {
  return static_cast<double>(cofactor_det_ld(a.cast<long double>()));
}

inline long double leading_minor(const riesz::SymMatrix& x, Eigen::Index k) {
  return cofactor_det_ld(x.dense().topLeftCorner(k, k).cast<long double>());
}

// log Delta_s(x) = sum_k (s_k - s_{k+1}) log Delta_k(x), s_{r+1} = 0.
inline double minor_ratio_log_power(const riesz::SymMatrix& x, const std::vector<double>& s) {
  const auto r = x.order();
  long double acc = 0.0L;
  for (Eigen::Index k = 1; k <= r; ++k) {
    const long double next = k < r ? s[static_cast<std::size_t>(k)] : 0.0;
    acc += (s[static_cast<std::size_t>(k - 1)] - next) * std::log(leading_minor(x, k));
  }
  return static_cast<double>(acc);
}

// Q diag(lambda) Q^T with log-uniform eigenvalues in [lo, hi].
inline riesz::SymMatrix random_spd(Eigen::Index r, std::mt19937_64& gen, double lo = 0.05, double hi = 20.0) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(std::log(lo), std::log(hi));
  Eigen::MatrixXd g(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = nd(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd lambda(r);
  for (Eigen::Index i = 0; i < r; ++i) lambda(i) = std::exp(ud(gen));
  return riesz::SymMatrix::symmetrize(q * lambda.asDiagonal() * q.transpose());
}

inline std::vector<double> random_vector(std::size_t r, std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  std::vector<double> v(r);
  for (auto& x : v) x = ud(gen);
  return v;
}

}  // namespace oracle
