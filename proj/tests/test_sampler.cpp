#include <gtest/gtest.h>

#include <random>

#include "riesz/sampler.hpp"
#include "riesz/verify.hpp"

using namespace riesz;

TEST(Pattern, Boundaries) {
  EXPECT_EQ(compute_boundaries({2, 2, 5}).boundaries(), (std::vector<Index>{2, 3}));
  EXPECT_EQ(compute_boundaries({4, 4, 4}).boundaries(), (std::vector<Index>{3}));
  EXPECT_EQ(compute_boundaries({1, 2, 3}).boundaries(), (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(compute_boundaries({7}).boundaries(), (std::vector<Index>{1}));
  EXPECT_THROW(compute_boundaries({3, 2}), PatternError);
  EXPECT_THROW(compute_boundaries({}), PatternError);
  EXPECT_THROW(compute_boundaries({0, 2}), PatternError);
  EXPECT_EQ(compute_boundaries({2, 3}).shape(), (PowerExponent{1.0, 1.5}));
}

TEST(Pattern, InteriorCondition) {
  EXPECT_TRUE(compute_boundaries({1, 2, 3}).almost_surely_interior());
  EXPECT_TRUE(compute_boundaries({2, 3, 5}).almost_surely_interior());
  EXPECT_FALSE(compute_boundaries({1, 1}).almost_surely_interior());
  EXPECT_FALSE(compute_boundaries({2, 2, 2}).almost_surely_interior());
}

TEST(Staircase, ZeroPattern) {
  const auto pattern = compute_boundaries({2, 2, 5});
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    RngStream rng(seed, 3);
    const Eigen::MatrixXd u = build_staircase_matrix(pattern, rng);
    ASSERT_EQ(u.rows(), 3);
    ASSERT_EQ(u.cols(), 5);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 5; ++j) {
        const bool structural = j >= pattern.counts()[static_cast<std::size_t>(i)];
        if (structural) {
          EXPECT_EQ(u(i, j), 0.0);
        } else {
          EXPECT_NE(u(i, j), 0.0);
        }
      }
  }
  RngStream rng(5, 0);
  const Eigen::MatrixXd one = build_staircase_matrix(compute_boundaries({1, 1}), rng);
  EXPECT_EQ(one.cols(), 1);
  EXPECT_NE(one(0, 0), 0.0);
  EXPECT_NE(one(1, 0), 0.0);
}

TEST(Staircase, RandomPatternsKeepStructuralZeros) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> len(1, 6), step(0, 3);
    std::vector<int> counts{1 + step(gen)};
    const int r = len(gen);
    while (static_cast<int>(counts.size()) < r) counts.push_back(counts.back() + step(gen));
    const auto pattern = compute_boundaries(counts);
    RngStream rng(static_cast<std::uint64_t>(trial), 0);
    const Eigen::MatrixXd u = build_staircase_matrix(pattern, rng);
    for (Index i = 0; i < u.rows(); ++i)
      for (Index j = counts[static_cast<std::size_t>(i)]; j < u.cols(); ++j) EXPECT_EQ(u(i, j), 0.0);
    const SymMatrix x = SymMatrix::gram(u);
    EXPECT_NE(cone_classify(x).verdict, ConeVerdict::outside);
    if (pattern.almost_surely_interior()) EXPECT_EQ(cone_classify(x).verdict, ConeVerdict::interior);
  }
}

TEST(Sampler, ReproducibleAcrossWorkerCounts) {
  const auto pattern = compute_boundaries({2, 3, 5});
  const auto a = sample_riesz_identity(pattern, 500, 42, 1);
  const auto b = sample_riesz_identity(pattern, 500, 42, 4);
  const auto c = sample_riesz_identity(pattern, 500, 43, 1);
  ASSERT_EQ(a.matrices.size(), 500u);
  for (std::size_t k = 0; k < 500; ++k) EXPECT_EQ(a.matrices[k], b.matrices[k]);
  EXPECT_FALSE(a.matrices[0] == c.matrices[0]);
  EXPECT_EQ(a.expected_mean, SymMatrix::diagonal({2, 3, 5}));
  EXPECT_THROW(sample_riesz_identity(pattern, 0, 1), ArgumentError);
}

TEST(Sampler, StreamMatchesBatch) {
  const auto pattern = compute_boundaries({1, 4});
  const std::size_t n = kStreamChunk + 17;
  const auto batch = sample_riesz_identity(pattern, n, 9, 2);
  std::size_t seen = 0;
  stream_riesz_identity(pattern, n, 9, 3, [&](std::size_t i, const SymMatrix& x) {
    EXPECT_EQ(i, seen);
    EXPECT_EQ(x, batch.matrices[i]);
    ++seen;
  });
  EXPECT_EQ(seen, n);
}

TEST(Sampler, WishartWithIdentityMatchesConstantPattern) {
  const auto w = sample_wishart_gaussian(3, 4, SymMatrix::identity(3), 200, 11, 2);
  const auto s = sample_riesz_identity(compute_boundaries({4, 4, 4}), 200, 11, 1);
  for (std::size_t k = 0; k < 200; ++k) EXPECT_EQ(w.matrices[k], s.matrices[k]);
  EXPECT_EQ(w.kind, BatchKind::wishart_gaussian);
  EXPECT_THROW(sample_wishart_gaussian(2, 3, SymMatrix::diagonal({1, -1}), 10, 1), InvalidScaleError);
  EXPECT_THROW(sample_wishart_gaussian(2, 3, SymMatrix::identity(3), 10, 1), ArgumentError);
}

TEST(Sampler, RankDeficientPatternStaysOnBoundary) {
  const auto batch = sample_riesz_identity(compute_boundaries({1, 1}), 1000, 3, 1);
  for (const auto& x : batch.matrices) EXPECT_EQ(cone_classify(x).verdict, ConeVerdict::boundary);
}

TEST(Sampler, MeansMatch) {
  const auto batch = sample_riesz_identity(compute_boundaries({2, 3, 5}), 20000, 1, 2);
  EXPECT_TRUE(moment_check(batch).pass);
  const SymMatrix sigma = SymMatrix::from_rows({{2, 0.5}, {0.5, 1}});
  const auto w = sample_wishart_gaussian(2, 3, sigma, 20000, 2, 2);
  EXPECT_EQ(w.expected_mean, 3.0 * sigma);
  EXPECT_TRUE(moment_check(w).pass);
}

TEST(Sampler, BlocksAreTopLeftCorners) {
  const auto pattern = compute_boundaries({2, 2, 5});
  RngStream rng(7, 1);
  const Eigen::MatrixXd u = build_staircase_matrix(pattern, rng);
  const SymMatrix x = SymMatrix::gram(u);
  for (std::size_t l = 1; l <= pattern.block_count(); ++l) {
    const Index p = pattern.boundaries()[l - 1];
    const Eigen::MatrixXd b = staircase_block(pattern, u, l);
    EXPECT_EQ(b.rows(), p);
    EXPECT_EQ(b.cols(), pattern.counts()[static_cast<std::size_t>(p - 1)]);
    EXPECT_TRUE(SymMatrix::gram(b).dense().isApprox(project_k(x, p).dense(), 1e-14));
  }
  EXPECT_THROW(staircase_block(pattern, u, 0), ArgumentError);
  EXPECT_THROW(staircase_block(pattern, u, 3), ArgumentError);
}

TEST(ScaleBatch, Behaviour) {
  const auto batch = sample_riesz_identity(compute_boundaries({2, 3}), 4000, 5, 1);
  const auto same = scale_batch(batch, Eigen::MatrixXd::Identity(2, 2));
  for (std::size_t k = 0; k < batch.count; ++k) EXPECT_EQ(same.matrices[k], batch.matrices[k]);

  const auto doubled = scale_batch(batch, 2.0 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_EQ(doubled.expected_mean, SymMatrix::diagonal({8, 12}));
  EXPECT_TRUE(moment_check(doubled).pass);
  for (const auto& x : doubled.matrices) EXPECT_NE(cone_classify(x).verdict, ConeVerdict::outside);

  Eigen::MatrixXd upper = Eigen::MatrixXd::Identity(2, 2);
  upper(0, 1) = 1.0;
  EXPECT_THROW(scale_batch(batch, upper), ArgumentError);
  EXPECT_THROW(scale_batch(batch, Eigen::MatrixXd::Zero(2, 2)), ArgumentError);
  EXPECT_THROW(scale_batch(batch, Eigen::MatrixXd::Identity(3, 3)), ArgumentError);
}

TEST(Rng, StreamsAreIndependentOfOrder) {
  RngStream a(1, 5), b(1, 5), c(1, 6);
  EXPECT_EQ(a(), b());
  RngStream d(1, 5);
  EXPECT_NE(d(), c());
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.001 * static_cast<double>(i);
  EXPECT_NEAR(pairwise_sum(v), 499.5, 1e-10);
}

TEST(Rng, ParallelForPropagatesErrors) {
  EXPECT_THROW(parallel_for(0, 100, 4,
                            [](std::size_t i) {
                              if (i == 63) throw ArgumentError("boom");
                            }),
               ArgumentError);
}
