#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"
#include "imvc/numkit/ops.hpp"
#include "imvc/numkit/tape.hpp"

namespace imvc::graph {

using num::Matrix;
using num::Tape;
using num::Var;

struct ViewGraph {
  Matrix adjacency;  // binary, symmetric, zero diagonal
  double sigma = 0.0;
  std::size_t k = 0;
};

inline Matrix pairwise_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double diff = x(i, c) - x(j, c);
        s += diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  return d;
}

/// Median of the nonzero off-diagonal distances (1.0 if all points coincide).
inline double median_bandwidth(const Matrix& x) {
  const Matrix d = pairwise_distances(x);
  std::vector<double> vals;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = i + 1; j < d.cols(); ++j)
      if (d(i, j) > 0.0) vals.push_back(d(i, j));
  if (vals.empty()) return 1.0;
  const std::size_t mid = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(mid), vals.end());
  double m = vals[mid];
  if (vals.size() % 2 == 0) {
    const double lo = *std::max_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lo);
  }
  return m;
}

/// S_ij = exp(−‖x_i − x_j‖² / 2σ²). An empty `sigma` selects median_bandwidth.
inline Matrix gaussian_similarity(const Matrix& xbar, std::optional<double> sigma = std::nullopt) {
  if (xbar.rows() < 2) throw ParameterError("gaussian_similarity: need at least 2 samples");
  const double s = sigma ? *sigma : median_bandwidth(xbar);
  if (!(s > 0.0)) throw ParameterError("gaussian_similarity: bandwidth must be positive");
  const Matrix d = pairwise_distances(xbar);
  Matrix out(d.rows(), d.cols());
  const double denom = 2.0 * s * s;
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = std::exp(-(d[k] * d[k]) / denom);
  return out;
}

/// Directed K-NN by similarity (self excluded, ties to the lower index),
/// symmetrised by OR.
inline ViewGraph knn_graph(const Matrix& sim, std::size_t k) {
  const std::size_t n = sim.rows();
  if (sim.cols() != n) throw DimensionError("knn_graph: similarity must be square, got " + sim.shape());
  if (k == 0 || k >= n)
    throw ParameterError("knn_graph: K = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + ")");
  ViewGraph g;
  g.k = k;
  g.adjacency = Matrix(n, n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (a == i) return false;
      if (b == i) return true;
      return sim(i, a) > sim(i, b);
    });
    for (std::size_t r = 0; r < k; ++r) {
      g.adjacency(i, order[r]) = 1.0;
      g.adjacency(order[r], i) = 1.0;
    }
  }
  return g;
}

inline ViewGraph build_view_graph(const Matrix& xbar, std::size_t k, std::optional<double> sigma = std::nullopt) {
  const double s = sigma ? *sigma : median_bandwidth(xbar);
  ViewGraph g = knn_graph(gaussian_similarity(xbar, s), k);
  g.sigma = s;
  return g;
}

/// A^v = Fᵀ · Ā^v · F
inline Matrix expand_graph(const Matrix& local, const data::IndicatorMatrix& f) {
  if (local.rows() != f.present() || local.cols() != f.present())
    throw DimensionError("expand_graph: local graph " + local.shape() + " but indicator selects " +
                         std::to_string(f.present()) + " of " + std::to_string(f.total) + " samples");
  Matrix out(f.total, f.total);
  for (std::size_t i = 0; i < f.present(); ++i)
    for (std::size_t j = 0; j < f.present(); ++j) out(f.index[i], f.index[j]) = local(i, j);
  return out;
}

inline std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw ParameterError("softmax: empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) z += (p[v] = std::exp(logits[v] - m));
  for (double& x : p) x /= z;
  return p;
}

/// A = Σ_v softmax(logits)_v · A^v
inline Matrix fuse_graphs(const std::vector<Matrix>& graphs, const std::vector<double>& logits) {
  if (graphs.empty()) throw ParameterError("fuse_graphs: no graphs");
  if (logits.size() != graphs.size()) throw DimensionError("fuse_graphs: one logit per graph required");
  const auto pi = softmax(logits);
  Matrix out(graphs.front().rows(), graphs.front().cols());
  for (std::size_t v = 0; v < graphs.size(); ++v) out.axpy(pi[v], graphs[v]);
  return out;
}

/// Differentiable fusion; `logits` is a 1 x V node.
inline Var fuse_graphs(const std::vector<Var>& graphs, const Var& logits) {
  if (graphs.empty()) throw ParameterError("fuse_graphs: no graphs");
  return num::weighted_sum(graphs, num::softmax_rows(logits));
}

namespace detail {
inline void check_adjacency(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("normalize_adjacency: non-square " + a.shape());
  for (double x : a.values())
    if (x < 0.0) throw ContractError("normalize_adjacency: negative edge weight");
}
}  // namespace detail

/// Â = D̃^{-1/2} (A + I) D̃^{-1/2}, D̃ the row sums of A + I.
inline Matrix normalize_adjacency(const Matrix& a) {
  detail::check_adjacency(a);
  const std::size_t n = a.rows();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 1.0;
    for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(deg);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = (a(i, j) + (i == j ? 1.0 : 0.0)) * inv_sqrt[i] * inv_sqrt[j];
  return out;
}

/// Differentiable counterpart of normalize_adjacency.
inline Var normalize_adjacency(const Var& a) {
  const Matrix out = normalize_adjacency(a.value());
  const std::size_t n = out.rows();
  std::vector<double> deg(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += a.value()(i, j);
  const std::size_t ia = a.id();
  return a.tape()->record(out, {a}, [ia, deg = std::move(deg)](Tape& tp, std::size_t self) {
    Matrix* ga = tp.sink(ia);
    if (!ga) return;
    const Matrix& y = tp.value(self);
    const Matrix& g = tp.grad(self);
    const std::size_t n = y.rows();
    // ∂L/∂d_i = −1/(2 d_i) · (Σ_l G_il Y_il + Σ_k G_ki Y_ki)
    std::vector<double> gdeg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double gy = g(i, j) * y(i, j);
        gdeg[i] += gy;
        gdeg[j] += gy;
      }
    for (std::size_t i = 0; i < n; ++i) gdeg[i] *= -0.5 / deg[i];
    for (std::size_t i = 0; i < n; ++i) {
      const double si = 1.0 / std::sqrt(deg[i]);
      for (std::size_t j = 0; j < n; ++j) (*ga)(i, j) += g(i, j) * si / std::sqrt(deg[j]) + gdeg[i];
    }
  });
}

}  // namespace imvc::graph
