#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"

namespace imvc::metrics {

using data::Labels;
using num::Matrix;

struct MetricTriple {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
};

/// y_i = argmax_j (1/V) Σ_v Y^v_ij, ties to the lowest index.
inline Labels final_assignment(const std::vector<Matrix>& ys) {
  if (ys.empty()) throw ParameterError("final_assignment: no views");
  const std::size_t n = ys.front().rows(), c = ys.front().cols();
  Matrix avg(n, c);
  for (const Matrix& y : ys) {
    y.require_same(avg, "final_assignment");
    avg += y;
  }
  avg *= 1.0 / static_cast<double>(ys.size());
  Labels out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < c; ++j)
      if (avg(i, j) > avg(i, best)) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

namespace detail {

inline void check_pair(const Labels& a, const Labels& b) {
  if (a.size() != b.size())
    throw ParameterError("metrics: label vectors differ in length (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  for (int x : a)
    if (x < 0) throw ParameterError("metrics: negative label");
  for (int x : b)
    if (x < 0) throw ParameterError("metrics: negative label");
}

inline std::size_t label_span(const Labels& a) {
  return a.empty() ? 0 : static_cast<std::size_t>(*std::max_element(a.begin(), a.end())) + 1;
}

/// counts[p][t]
inline std::vector<std::vector<double>> contingency(const Labels& pred, const Labels& truth) {
  std::vector<std::vector<double>> m(label_span(pred), std::vector<double>(label_span(truth), 0.0));
  for (std::size_t i = 0; i < pred.size(); ++i) m[pred[i]][truth[i]] += 1.0;
  return m;
}

inline double comb2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace detail

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials). Returns assignment[row] = column.
inline std::vector<std::size_t> hungarian_min(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) assign[p[j] - 1] = j - 1;
  return assign;
}

/// Best one-to-one cluster→class agreement fraction.
inline double accuracy(const Labels& pred, const Labels& truth) {
  detail::check_pair(pred, truth);
  if (pred.empty()) return 1.0;
  const auto counts = detail::contingency(pred, truth);
  const std::size_t k = std::max(counts.size(), counts.front().size());
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) cost[i][j] = -counts[i][j];
  const auto assign = hungarian_min(cost);
  double hit = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (assign[i] < counts[i].size()) hit += counts[i][assign[i]];
  return hit / static_cast<double>(pred.size());
}

enum class NmiNorm { geometric, arithmetic };

inline double nmi(const Labels& pred, const Labels& truth, NmiNorm norm = NmiNorm::geometric) {
  detail::check_pair(pred, truth);
  const double n = static_cast<double>(pred.size());
  if (pred.empty()) return 1.0;
  const auto counts = detail::contingency(pred, truth);
  std::vector<double> rows(counts.size(), 0.0), cols(counts.front().size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      rows[i] += counts[i][j];
      cols[j] += counts[i][j];
    }
  auto entropy = [n](const std::vector<double>& m) {
    double h = 0.0;
    for (double c : m)
      if (c > 0.0) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double hp = entropy(rows), ht = entropy(cols);
  double mi = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      const double c = counts[i][j];
      if (c > 0.0) mi += (c / n) * std::log(c * n / (rows[i] * cols[j]));
    }
  if (hp == 0.0 || ht == 0.0) return (hp == 0.0 && ht == 0.0) ? 1.0 : 0.0;
  const double denom = norm == NmiNorm::geometric ? std::sqrt(hp * ht) : 0.5 * (hp + ht);
  return std::clamp(mi / denom, 0.0, 1.0);
}

/// Adjusted Rand index (Hubert–Arabie).
inline double ari(const Labels& pred, const Labels& truth) {
  detail::check_pair(pred, truth);
  const auto counts = detail::contingency(pred, truth);
  if (pred.size() < 2) return 1.0;
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  std::vector<double> cols(counts.front().size(), 0.0);
  for (const auto& row : counts) {
    double r = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      index += detail::comb2(row[j]);
      r += row[j];
      cols[j] += row[j];
    }
    sum_a += detail::comb2(r);
  }
  for (double c : cols) sum_b += detail::comb2(c);
  const double total = detail::comb2(static_cast<double>(pred.size()));
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return index == max_index ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

inline MetricTriple evaluate_labels(const Labels& pred, const Labels& truth, NmiNorm norm = NmiNorm::geometric) {
  return {accuracy(pred, truth), nmi(pred, truth, norm), ari(pred, truth)};
}

}  // namespace imvc::metrics
