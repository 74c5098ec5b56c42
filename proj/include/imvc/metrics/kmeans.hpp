#pragma once

#include <cstdint>
#include <limits>
#include <algorithm>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/metrics/metrics.hpp"
#include "imvc/numkit/matrix.hpp"

namespace imvc::metrics {

struct KMeansResult {
  Labels labels;
  Matrix centroids;
  double inertia = 0.0;
};

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;
};

namespace detail {

inline double sqdist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline Matrix kmeanspp_seed(const Matrix& x, std::size_t c, std::mt19937_64& rng) {
  const std::size_t n = x.rows();
  Matrix centers(c, x.cols());
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  auto place = [&](std::size_t slot, std::size_t row) {
    std::copy(x.row_span(row).begin(), x.row_span(row).end(), centers.row_span(slot).begin());
  };
  place(0, first(rng));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sqdist(x.row_span(i), centers.row_span(0));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t s = 1; s < c; ++s) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = unif(rng) * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    place(s, pick);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sqdist(x.row_span(i), centers.row_span(s)));
  }
  return centers;
}

inline KMeansResult lloyd(const Matrix& x, Matrix centers, std::size_t max_iter) {
  const std::size_t n = x.rows(), c = centers.rows(), d = x.cols();
  Labels labels(n, -1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < c; ++k) {
        const double dd = sqdist(x.row_span(i), centers.row_span(k));
        if (dd < bd) {
          bd = dd;
          best = static_cast<int>(k);
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Matrix sums(c, d);
    std::vector<std::size_t> counts(c, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(labels[i]);
      ++counts[k];
      for (std::size_t j = 0; j < d; ++j) sums(k, j) += x(i, j);
    }
    for (std::size_t k = 0; k < c; ++k) {
      if (counts[k] == 0) {
        // Empty cluster: reseed at the point farthest from its centre.
        std::size_t far = 0;
        double fd = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dd = sqdist(x.row_span(i), centers.row_span(static_cast<std::size_t>(labels[i])));
          if (dd > fd) {
            fd = dd;
            far = i;
          }
        }
        std::copy(x.row_span(far).begin(), x.row_span(far).end(), centers.row_span(k).begin());
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) centers(k, j) = sums(k, j) / static_cast<double>(counts[k]);
    }
  }
  KMeansResult r;
  r.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    r.inertia += sqdist(x.row_span(i), centers.row_span(static_cast<std::size_t>(labels[i])));
  r.labels = std::move(labels);
  r.centroids = std::move(centers);
  return r;
}

}  // namespace detail

/// Lloyd's algorithm with k-means++ seeding; best of `restarts` by inertia.
inline KMeansResult kmeans(const Matrix& x, std::size_t c, const KMeansOptions& opt = {}) {
  if (c == 0) throw ParameterError("kmeans: cluster count must be positive");
  if (x.rows() < c)
    throw ParameterError("kmeans: " + std::to_string(x.rows()) + " points cannot form " + std::to_string(c) +
                         " clusters");
  std::mt19937_64 master(opt.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(opt.restarts, 1); ++r) {
    std::mt19937_64 rng(master());
    KMeansResult cur = detail::lloyd(x, detail::kmeanspp_seed(x, c, rng), opt.max_iter);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

/// Replaces absent rows of each view by the mean of its present rows.
inline std::vector<Matrix> mean_fill(const data::MultiViewDataset& ds) {
  std::vector<Matrix> out;
  for (std::size_t v = 0; v < ds.view_count(); ++v) {
    const Matrix& x = ds.views[v];
    const std::size_t present = ds.mask.view_count(v);
    if (present == 0) throw EmptyViewError("view " + std::to_string(v + 1) + " has no present samples");
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
      if (ds.mask.present(i, v))
        for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(i, j);
    for (double& m : mean) m /= static_cast<double>(present);
    Matrix filled = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
      if (!ds.mask.present(i, v)) std::copy(mean.begin(), mean.end(), filled.row_span(i).begin());
    out.push_back(std::move(filled));
  }
  return out;
}

struct BaselineResult {
  Labels labels;
  std::size_t chosen_view = 0;  // BSV only
  double inertia = 0.0;
};

/// Best single view: k-means per mean-filled view, keep the best by ACC when
/// labels exist, otherwise by lowest inertia.
inline BaselineResult baseline_bsv(const data::MultiViewDataset& ds, const KMeansOptions& opt = {}) {
  const auto filled = mean_fill(ds);
  BaselineResult best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < filled.size(); ++v) {
    KMeansResult r = kmeans(filled[v], ds.clusters, opt);
    const double score = ds.labels ? accuracy(r.labels, *ds.labels) : -r.inertia;
    if (score > best_score) {
      best_score = score;
      best = {std::move(r.labels), v, r.inertia};
    }
  }
  return best;
}

/// Mean-filled views concatenated column-wise, then k-means.
inline BaselineResult baseline_concat(const data::MultiViewDataset& ds, const KMeansOptions& opt = {}) {
  KMeansResult r = kmeans(num::hstack(mean_fill(ds)), ds.clusters, opt);
  return {std::move(r.labels), 0, r.inertia};
}

}  // namespace imvc::metrics
