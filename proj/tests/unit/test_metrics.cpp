#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/metrics/kmeans.hpp"
#include "imvc/metrics/metrics.hpp"
#include "imvc/trainer/train.hpp"
#include "support/oracles.hpp"

using namespace imvc;
using data::Labels;
using num::Matrix;

namespace {

Labels random_labels(std::size_t n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, k - 1);
  Labels l(n);
  for (int& x : l) x = u(rng);
  return l;
}

data::MultiViewDataset blob_dataset(std::size_t views, std::uint64_t seed) {
  data::SyntheticSpec s;
  s.per_cluster = 30;
  s.views = views;
  s.seed = seed;
  return data::generate_synthetic(s);
}

}  // namespace

TEST(Metrics, MatchBruteForceOraclesOnSmallInstances) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const int kp = 1 + static_cast<int>(rng() % 3), kt = 1 + static_cast<int>(rng() % 3);
    const Labels pred = random_labels(n, kp, rng), truth = random_labels(n, kt, rng);
    EXPECT_EQ(metrics::accuracy(pred, truth), oracle::brute_force_accuracy(pred, truth));
    EXPECT_NEAR(metrics::ari(pred, truth), oracle::pair_counting_ari(pred, truth), 1e-12);
    EXPECT_NEAR(metrics::nmi(pred, truth), std::clamp(oracle::nmi(pred, truth), 0.0, 1.0), 1e-12);
    EXPECT_NEAR(metrics::nmi(pred, truth, metrics::NmiNorm::arithmetic),
                std::clamp(oracle::nmi(pred, truth, true), 0.0, 1.0), 1e-12);
  }
}

TEST(Metrics, PerfectAndRelabelledPartitions) {
  const Labels truth{0, 0, 1, 1, 2, 2, 2};
  const Labels relabel{2, 2, 0, 0, 1, 1, 1};
  EXPECT_EQ(metrics::accuracy(relabel, truth), 1.0);
  EXPECT_NEAR(metrics::nmi(relabel, truth), 1.0, 1e-12);
  EXPECT_NEAR(metrics::ari(relabel, truth), 1.0, 1e-12);
}

TEST(Metrics, HandComputedValues) {
  // Contingency [[2,1],[0,3]]: ACC 5/6.
  const Labels pred{0, 0, 0, 1, 1, 1}, truth{0, 0, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(metrics::accuracy(pred, truth), 5.0 / 6.0);
  // index = C(2,2)+C(3,2) = 4, sum_a = 6, sum_b = C(2,2)+C(4,2) = 7, total 15
  const double expected = 6.0 * 7.0 / 15.0;
  EXPECT_NEAR(metrics::ari(pred, truth), (4.0 - expected) / (6.5 - expected), 1e-12);
}

TEST(Metrics, SingleClusterEdgeCases) {
  const Labels one{0, 0, 0, 0}, two{0, 1, 0, 1};
  EXPECT_EQ(metrics::nmi(one, one), 1.0);
  EXPECT_EQ(metrics::nmi(one, two), 0.0);
  EXPECT_EQ(metrics::ari(one, one), 1.0);
  EXPECT_DOUBLE_EQ(metrics::accuracy(one, two), 0.5);
}

TEST(Metrics, InvalidLabelsThrow) {
  EXPECT_THROW(metrics::accuracy({0, 1}, {0}), ParameterError);
  EXPECT_THROW(metrics::nmi({0, -1}, {0, 1}), ParameterError);
}

TEST(Metrics, HungarianMatchesBruteForceOnCostMatrices) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 5;
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (auto& r : cost)
      for (double& x : r) x = u(rng);
    const auto a = metrics::hungarian_min(cost);
    double got = 0.0;
    for (std::size_t i = 0; i < k; ++i) got += cost[i][a[i]];
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += cost[i][perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
}

TEST(FinalAssignment, AveragesViewsWithLowIndexTies) {
  Matrix a(2, 2), b(2, 2);
  a(0, 0) = 0.9; a(0, 1) = 0.1; b(0, 0) = 0.2; b(0, 1) = 0.8;  // mean 0.55 vs 0.45
  a(1, 0) = 0.5; a(1, 1) = 0.5; b(1, 0) = 0.5; b(1, 1) = 0.5;  // tie
  EXPECT_EQ(metrics::final_assignment({a, b}), (Labels{0, 0}));
  EXPECT_THROW(metrics::final_assignment({}), ParameterError);
}

TEST(KMeans, RecoversSeparatedBlobs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.1);
  Matrix x(60, 2);
  Labels truth(60);
  for (std::size_t i = 0; i < 60; ++i) {
    truth[i] = static_cast<int>(i % 3);
    x(i, 0) = 5.0 * truth[i] + g(rng);
    x(i, 1) = g(rng);
  }
  const auto r = metrics::kmeans(x, 3, {.seed = 4});
  EXPECT_EQ(metrics::accuracy(r.labels, truth), 1.0);
  EXPECT_EQ(r.centroids.rows(), 3u);
}

TEST(KMeans, InertiaIsSumOfSquaredDistancesToAssignedCentroid) {
  std::mt19937_64 rng(5);
  const Matrix x = oracle::random_matrix(40, 3, rng);
  const auto r = metrics::kmeans(x, 4, {.seed = 1});
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      const double d = x(i, k) - r.centroids(static_cast<std::size_t>(r.labels[i]), k);
      s += d * d;
    }
  EXPECT_NEAR(r.inertia, s, 1e-9);
  // Each point sits at its nearest centroid after convergence.
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double own = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double d = x(i, k) - r.centroids(static_cast<std::size_t>(r.labels[i]), k);
      own += d * d;
    }
    for (std::size_t c = 0; c < 4; ++c) {
      double other = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double d = x(i, k) - r.centroids(c, k);
        other += d * d;
      }
      EXPECT_LE(own, other + 1e-12);
    }
  }
}

TEST(KMeans, DeterministicForSeedAndRejectsBadInput) {
  std::mt19937_64 rng(6);
  const Matrix x = oracle::random_matrix(30, 2, rng);
  EXPECT_EQ(metrics::kmeans(x, 3, {.seed = 9}).labels, metrics::kmeans(x, 3, {.seed = 9}).labels);
  EXPECT_THROW(metrics::kmeans(x, 0), ParameterError);
  EXPECT_THROW(metrics::kmeans(x, 31), ParameterError);
}

TEST(Baselines, MeanFillUsesPresentRowMeans) {
  data::MultiViewDataset ds;
  Matrix v(3, 2);
  v(0, 0) = 1.0; v(0, 1) = 2.0; v(1, 0) = 99.0; v(1, 1) = 99.0; v(2, 0) = 3.0; v(2, 1) = 4.0;
  ds.views = {v};
  ds.mask = data::MaskMatrix::complete(3, 1);
  ds.mask.set(1, 0, false);
  ds.clusters = 2;
  const auto f = metrics::mean_fill(ds);
  EXPECT_DOUBLE_EQ(f[0](1, 0), 2.0);
  EXPECT_DOUBLE_EQ(f[0](1, 1), 3.0);
  EXPECT_DOUBLE_EQ(f[0](0, 0), 1.0);
}

TEST(Baselines, ConcatOnCompleteSeparatedDataIsNearPerfect) {
  const auto ds = blob_dataset(3, 11);
  const auto r = metrics::baseline_concat(ds, {.seed = 1});
  EXPECT_GE(metrics::accuracy(r.labels, *ds.labels), 0.99);
}

TEST(Baselines, SingleViewBsvEqualsConcat) {
  auto ds = train::with_missing(blob_dataset(2, 12), 0.5, 3);
  ds.views.resize(1);
  data::MaskMatrix m(ds.samples(), 1, true);
  ds.mask = m;
  const auto bsv = metrics::baseline_bsv(ds, {.seed = 2});
  const auto cat = metrics::baseline_concat(ds, {.seed = 2});
  EXPECT_EQ(bsv.labels, cat.labels);
  EXPECT_EQ(bsv.chosen_view, 0u);
}

TEST(Baselines, BsvPicksBestViewByAccuracy) {
  auto ds = blob_dataset(2, 13);
  std::mt19937_64 rng(4);
  ds.views[1] = oracle::random_matrix(ds.samples(), ds.views[1].cols(), rng);
  const auto r = metrics::baseline_bsv(ds, {.seed = 3});
  EXPECT_EQ(r.chosen_view, 0u);
}
