#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/errors.hpp"

namespace riesz {

using Index = Eigen::Index;

// Dense real symmetric matrix. Every constructor path leaves the stored
// matrix exactly symmetric, and the only mutator writes both triangles.
class SymMatrix {
 public:
  explicit SymMatrix(Index order) : m_(Eigen::MatrixXd::Zero(order, order)) {
    if (order < 1) throw ArgumentError("matrix order must be at least 1");
  }

  static SymMatrix identity(Index order) { return scaled_identity(order, 1.0); }

  static SymMatrix scaled_identity(Index order, double c) {
    SymMatrix x(order);
    x.m_.diagonal().setConstant(c);
    return x;
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix x(static_cast<Index>(d.size()));
    for (Index i = 0; i < x.order(); ++i) x.m_(i, i) = d[static_cast<std::size_t>(i)];
    return x;
  }

  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
    Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Index>(row.size()) != m.cols()) throw ArgumentError("matrix rows must be square");
      Index j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return from_dense(m);
  }

  // Rejects inputs whose asymmetry exceeds tol (relative to the largest
  // entry, floor 1), then symmetrizes by averaging.
  static SymMatrix from_dense(const Eigen::MatrixXd& m, double tol = 1e-9) {
    if (m.rows() != m.cols()) throw ArgumentError("matrix is not square");
    if (m.rows() < 1) throw ArgumentError("matrix order must be at least 1");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= tol * scale)) {
      throw ArgumentError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
    return symmetrize(m);
  }

  static SymMatrix symmetrize(const Eigen::MatrixXd& m) {
    SymMatrix x(m.rows());
    x.m_ = 0.5 * (m + m.transpose());
    return x;
  }

  // u * u^T for an r x c matrix u.
  static SymMatrix gram(const Eigen::MatrixXd& u) {
    SymMatrix x(u.rows());
    x.m_.noalias() = u * u.transpose();
    x.m_.triangularView<Eigen::StrictlyLower>() = x.m_.transpose();
    return x;
  }

  Index order() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }

  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Eigen::MatrixXd& dense() const noexcept { return m_; }

  double trace() const { return m_.trace(); }

  double max_abs_diagonal() const { return m_.diagonal().cwiseAbs().maxCoeff(); }

  bool is_zero() const { return (m_.array() == 0.0).all(); }

  // t * x * t^T
  SymMatrix congruence(const Eigen::MatrixXd& t) const {
    if (t.cols() != order()) throw ArgumentError("congruence factor has wrong column count");
    return symmetrize(t * m_ * t.transpose());
  }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same_order(a, b);
    SymMatrix x(a.order());
    x.m_ = a.m_ + b.m_;
    return x;
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same_order(a, b);
    SymMatrix x(a.order());
    x.m_ = a.m_ - b.m_;
    return x;
  }
  friend SymMatrix operator*(double c, const SymMatrix& a) {
    SymMatrix x(a.order());
    x.m_ = c * a.m_;
    return x;
  }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.order() == b.order() && a.m_ == b.m_;
  }

 private:
  static void check_same_order(const SymMatrix& a, const SymMatrix& b) {
    if (a.order() != b.order()) throw ArgumentError("matrix orders differ");
  }

  Eigen::MatrixXd m_;
};

// <a, b> = tr(a b)
inline double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw ArgumentError("matrix orders differ");
  return a.dense().cwiseProduct(b.dense()).sum();
}

// Real exponent vector (s_1, ..., s_r) indexing generalized powers.
class PowerExponent {
 public:
  PowerExponent() = default;
  PowerExponent(std::initializer_list<double> v) : v_(v) {}
  explicit PowerExponent(std::vector<double> v) : v_(std::move(v)) {}

  static PowerExponent constant(std::size_t r, double p) {
    return PowerExponent(std::vector<double>(r, p));
  }

  std::size_t size() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const noexcept { return v_; }

  PowerExponent shifted(double m) const {
    auto out = v_;
    for (double& x : out) x += m;
    return PowerExponent(std::move(out));
  }

  PowerExponent head(std::size_t k) const {
    return PowerExponent(std::vector<double>(v_.begin(), v_.begin() + static_cast<std::ptrdiff_t>(k)));
  }

  friend PowerExponent operator+(const PowerExponent& a, const PowerExponent& b) {
    if (a.size() != b.size()) throw ArgumentError("exponent lengths differ");
    auto out = a.v_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.v_[i];
    return PowerExponent(std::move(out));
  }
  friend bool operator==(const PowerExponent&, const PowerExponent&) = default;

 private:
  std::vector<double> v_;
};

// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Matrix text format: a line holding r, then r lines of r entries.
// Reads one matrix; returns false on clean end of input.
inline bool read_matrix(std::istream& in, std::optional<SymMatrix>& out) {
  long long r = 0;
  if (!(in >> r)) {
    if (in.eof()) return false;
    throw ParseError("expected matrix order");
  }
  if (r < 1) throw ParseError("matrix order must be at least 1");
  Eigen::MatrixXd m(r, r);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) {
      if (!(in >> m(i, j))) throw ParseError("matrix truncated at row " + std::to_string(i + 1));
    }
  }
  try {
    out.emplace(SymMatrix::from_dense(m, 1e-9));
  } catch (const ArgumentError& e) {
    throw ParseError(e.what());
  }
  return true;
}

inline std::vector<SymMatrix> read_matrices(std::istream& in) {
  std::vector<SymMatrix> out;
  std::optional<SymMatrix> x;
  while (read_matrix(in, x)) out.push_back(*x);
  return out;
}

inline SymMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::optional<SymMatrix> x;
  if (!read_matrix(in, x)) throw ParseError("empty matrix text");
  return *x;
}

inline void write_matrix(std::ostream& out, const SymMatrix& x) {
  out << x.order() << '\n';
  for (Index i = 0; i < x.order(); ++i) {
    for (Index j = 0; j < x.order(); ++j) {
      if (j) out << ' ';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

}  // namespace riesz
