#pragma once

// Staircase missing-data Gaussian sampler.
//
// Component i (1-based) of an N_r(0, I) vector is observed s_i times with
// 0 < s_1 <= ... <= s_r; every observation misses a prefix of components.
// Zero-imputing the missing entries gives an r x s_r matrix U whose row i
// holds s_i standard normals followed by zeros, and X = U U^T is distributed
// R((s_1/2, ..., s_r/2), I/2).

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "riesz/cone.hpp"
#include "riesz/errors.hpp"
#include "riesz/rng.hpp"
#include "riesz/sym_matrix.hpp"

namespace riesz {

class StaircasePattern {
 public:
  const std::vector<int>& counts() const noexcept { return counts_; }
  // p_1 < ... < p_{k+1} = r, 1-based ends of the constant runs of counts.
  const std::vector<Index>& boundaries() const noexcept { return boundaries_; }

  Index order() const noexcept { return static_cast<Index>(counts_.size()); }
  int max_count() const noexcept { return counts_.back(); }
  std::size_t block_count() const noexcept { return boundaries_.size(); }

  // (s_1/2, ..., s_r/2)
  PowerExponent shape() const {
    std::vector<double> v;
    v.reserve(counts_.size());
    for (int c : counts_) v.push_back(0.5 * c);
    return PowerExponent(std::move(v));
  }

  // X is positive definite almost surely iff s_i >= i for every i.
  bool almost_surely_interior() const noexcept {
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (counts_[i] < static_cast<int>(i + 1)) return false;
    }
    return true;
  }

  friend bool operator==(const StaircasePattern&, const StaircasePattern&) = default;

 private:
  StaircasePattern(std::vector<int> counts, std::vector<Index> boundaries)
      : counts_(std::move(counts)), boundaries_(std::move(boundaries)) {}

  friend StaircasePattern compute_boundaries(const std::vector<int>& counts);

  std::vector<int> counts_;
  std::vector<Index> boundaries_;
};

inline StaircasePattern compute_boundaries(const std::vector<int>& counts) {
  if (counts.empty()) throw PatternError(0, "observation counts are empty");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] <= 0) {
      throw PatternError(i + 1, "count at index " + std::to_string(i + 1) + " is not positive");
    }
    if (i > 0 && counts[i] < counts[i - 1]) {
      throw PatternError(i + 1, "counts decrease at index " + std::to_string(i + 1));
    }
  }
  std::vector<Index> boundaries;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] != counts[i - 1]) boundaries.push_back(static_cast<Index>(i));
  }
  boundaries.push_back(static_cast<Index>(counts.size()));
  return StaircasePattern(counts, std::move(boundaries));
}

// U[i][j] ~ N(0,1) for j < s_i (0-based), exactly 0 otherwise. Draws are
// consumed row by row.
inline Eigen::MatrixXd build_staircase_matrix(const StaircasePattern& pattern, RngStream& rng) {
  const Index r = pattern.order();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(r, pattern.max_count());
  for (Index i = 0; i < r; ++i) {
    const int si = pattern.counts()[static_cast<std::size_t>(i)];
    for (Index j = 0; j < si; ++j) u(i, j) = rng.normal();
  }
  return u;
}

// U^{(l)}: the first p_l rows and s_{p_l} columns of U (l is 1-based).
inline Eigen::MatrixXd staircase_block(const StaircasePattern& pattern, const Eigen::MatrixXd& u,
                                       std::size_t level) {
  if (level < 1 || level > pattern.block_count()) throw ArgumentError("block level out of range");
  const Index rows = pattern.boundaries()[level - 1];
  const int cols = pattern.counts()[static_cast<std::size_t>(rows - 1)];
  return u.topLeftCorner(rows, cols);
}

enum class BatchKind { riesz_identity, wishart_gaussian, scaled };

inline const char* to_string(BatchKind k) {
  switch (k) {
    case BatchKind::riesz_identity: return "riesz_identity";
    case BatchKind::wishart_gaussian: return "wishart_gaussian";
    case BatchKind::scaled: return "scaled";
  }
  return "?";
}

struct SampleBatch {
  StaircasePattern pattern;
  std::uint64_t seed;
  std::size_t count;
  std::vector<SymMatrix> matrices;
  // E[X] implied by the construction.
  SymMatrix expected_mean;
  BatchKind kind;
};

inline SymMatrix staircase_mean(const StaircasePattern& pattern) {
  std::vector<double> d(pattern.counts().begin(), pattern.counts().end());
  return SymMatrix::diagonal(d);
}

// X for sample `index`; depends only on (pattern, seed, index).
inline SymMatrix riesz_identity_draw(const StaircasePattern& pattern, std::uint64_t seed,
                                     std::uint64_t index) {
  RngStream rng(seed, index);
  return SymMatrix::gram(build_staircase_matrix(pattern, rng));
}

inline constexpr std::size_t kStreamChunk = 8192;

// Generates samples [0, count) chunk by chunk and hands them to sink in
// index order; memory stays bounded by the chunk size.
inline void stream_riesz_identity(const StaircasePattern& pattern, std::size_t count,
                                  std::uint64_t seed, unsigned workers,
                                  const std::function<void(std::size_t, const SymMatrix&)>& sink) {
  std::vector<std::optional<SymMatrix>> chunk;
  for (std::size_t lo = 0; lo < count; lo += kStreamChunk) {
    const std::size_t hi = std::min(count, lo + kStreamChunk);
    chunk.assign(hi - lo, std::nullopt);
    parallel_for(lo, hi, workers, [&](std::size_t i) {
      chunk[i - lo].emplace(riesz_identity_draw(pattern, seed, i));
    });
    for (std::size_t i = lo; i < hi; ++i) sink(i, *chunk[i - lo]);
  }
}

inline SampleBatch sample_riesz_identity(const StaircasePattern& pattern, std::size_t count,
                                         std::uint64_t seed, unsigned workers = default_workers()) {
  if (count < 1) throw ArgumentError("sample count must be at least 1");
  std::vector<std::optional<SymMatrix>> slots(count);
  parallel_for(0, count, workers,
               [&](std::size_t i) { slots[i].emplace(riesz_identity_draw(pattern, seed, i)); });
  std::vector<SymMatrix> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return {pattern, seed, count, std::move(out), staircase_mean(pattern), BatchKind::riesz_identity};
}

// Columns i.i.d. N_r(0, sigma), X = U U^T ~ W_r(s_cols/2, sigma^{-1}/2)
// in the natural convention.
inline SampleBatch sample_wishart_gaussian(Index r, int s_cols, const SymMatrix& sigma,
                                           std::size_t count, std::uint64_t seed,
                                           unsigned workers = default_workers()) {
  if (sigma.order() != r) throw ArgumentError("sigma has the wrong order");
  if (s_cols < 1) throw ArgumentError("column count must be at least 1");
  if (count < 1) throw ArgumentError("sample count must be at least 1");
  Eigen::MatrixXd l;
  try {
    l = cholesky_lower(sigma);
  } catch (const NotPositiveDefiniteError&) {
    throw InvalidScaleError("sigma is not positive definite");
  }
  const StaircasePattern pattern =
      compute_boundaries(std::vector<int>(static_cast<std::size_t>(r), s_cols));
  std::vector<std::optional<SymMatrix>> slots(count);
  parallel_for(0, count, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    Eigen::MatrixXd z(r, s_cols);
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < s_cols; ++b) z(a, b) = rng.normal();
    slots[i].emplace(SymMatrix::gram(l.triangularView<Eigen::Lower>() * z));
  });
  std::vector<SymMatrix> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return {pattern, seed, count, std::move(out), static_cast<double>(s_cols) * sigma,
          BatchKind::wishart_gaussian};
}

// Experimental: X -> t X t^T. The law of the result is not known in closed
// form; only the first moment is carried along.
inline SampleBatch scale_batch(const SampleBatch& batch, const Eigen::MatrixXd& t) {
  const Index r = batch.pattern.order();
  if (t.rows() != r || t.cols() != r) throw ArgumentError("scale factor has the wrong shape");
  if (!t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0)) {
    throw ArgumentError("scale factor is not lower triangular");
  }
  for (Index i = 0; i < r; ++i) {
    if (!(std::abs(t(i, i)) > 0.0) || !std::isfinite(t(i, i))) {
      throw ArgumentError("scale factor is degenerate at index " + std::to_string(i + 1));
    }
  }
  std::vector<SymMatrix> out;
  out.reserve(batch.matrices.size());
  for (const auto& x : batch.matrices) out.push_back(x.congruence(t));
  return {batch.pattern, batch.seed, batch.count, std::move(out),
          batch.expected_mean.congruence(t), BatchKind::scaled};
}

}  // namespace riesz
