#pragma once

// Scalar-loop reference implementations. Each is written directly from the
// defining formula, without the library's matrix ops or tape.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "imvc/datakit/dataset.hpp"
#include "imvc/numkit/matrix.hpp"

namespace imvc::oracle {

using data::Labels;
using num::Matrix;

inline double sqdist_rows(const Matrix& x, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.cols(); ++k) s += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
  return s;
}

/// S_ij = exp(-‖x_i - x_j‖² / (2σ²))
inline Matrix gaussian_similarity(const Matrix& x, double sigma) {
  Matrix s(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.rows(); ++j) s(i, j) = std::exp(-sqdist_rows(x, i, j) / (2.0 * sigma * sigma));
  return s;
}

/// (1/V) Σ_v (1/n_v) Σ_i Σ_k (x̂ - x)²
inline double reconstruction(const std::vector<Matrix>& xhat, const std::vector<Matrix>& x) {
  double total = 0.0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    double s = 0.0;
    for (std::size_t i = 0; i < x[v].rows(); ++i)
      for (std::size_t k = 0; k < x[v].cols(); ++k) s += (xhat[v](i, k) - x[v](i, k)) * (xhat[v](i, k) - x[v](i, k));
    total += s / static_cast<double>(x[v].rows());
  }
  return total / static_cast<double>(x.size());
}

/// Z_i = Σ_{v : i present} Z̄^v_{r(v,i)} / T_i, rows of each Z̄^v in ascending sample order.
inline Matrix consensus(const std::vector<Matrix>& zbar, const data::MaskMatrix& mask) {
  const std::size_t n = mask.samples(), d = zbar.front().cols();
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.0;
    for (std::size_t v = 0; v < mask.views(); ++v) {
      if (!mask.present(i, v)) continue;
      std::size_t r = 0;
      for (std::size_t j = 0; j < i; ++j) r += mask.present(j, v) ? 1 : 0;
      for (std::size_t k = 0; k < d; ++k) z(i, k) += zbar[v](r, k);
      t += 1.0;
    }
    for (std::size_t k = 0; k < d; ++k) z(i, k) /= t;
  }
  return z;
}

/// p_ij = (1 + ‖e_i - e_j‖²)^{-1} / Σ_{k≠l} (1 + ‖e_k - e_l‖²)^{-1}, p_ii = 0
inline Matrix pair_distribution(const Matrix& e) {
  const std::size_t n = e.rows();
  Matrix p(n, n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        p(i, j) = 1.0 / (1.0 + sqdist_rows(e, i, j));
        z += p(i, j);
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= z;
  return p;
}

/// Σ_{i≠j} q_ij log(q_ij / p_ij) with both probabilities floored at 1e-12
inline double kl(const Matrix& q, const Matrix& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (i == j) continue;
      s += q(i, j) * (std::log(std::max(q(i, j), 1e-12)) - std::log(std::max(p(i, j), 1e-12)));
    }
  return s;
}

/// Σ_v KL(Q ‖ P^v)
inline double structure_consistency(const Matrix& z, const std::vector<Matrix>& h) {
  const Matrix q = pair_distribution(z);
  double s = 0.0;
  for (const Matrix& hv : h) s += kl(q, pair_distribution(hv));
  return s;
}

inline double column_cosine(const Matrix& a, std::size_t i, const Matrix& b, std::size_t j) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    dot += a(r, i) * b(r, j);
    na += a(r, i) * a(r, i);
    nb += b(r, j) * b(r, j);
  }
  return dot / (std::max(std::sqrt(na), 1e-12) * std::max(std::sqrt(nb), 1e-12));
}

/// (1/2C) Σ_j Σ_v Σ_{w≠v} -log( e^{d(j^v, j^w)/τ} /
///   (Σ_k e^{d(j^v, k^v)/τ} - e^{1/τ} + Σ_k e^{d(j^v, k^w)/τ}) )
inline double contrastive_pairwise(const std::vector<Matrix>& y, double tau) {
  const std::size_t c = y.front().cols();
  double total = 0.0;
  for (std::size_t v = 0; v < y.size(); ++v)
    for (std::size_t w = 0; w < y.size(); ++w) {
      if (v == w) continue;
      for (std::size_t j = 0; j < c; ++j) {
        double denom = -std::exp(1.0 / tau);
        for (std::size_t k = 0; k < c; ++k)
          denom += std::exp(column_cosine(y[v], j, y[v], k) / tau) + std::exp(column_cosine(y[v], j, y[w], k) / tau);
        total += -(column_cosine(y[v], j, y[w], j) / tau - std::log(denom));
      }
    }
  return total / (2.0 * static_cast<double>(c));
}

/// Σ_v Σ_j s_j^v log s_j^v, s_j^v = (1/N) Σ_i y^v_ij
inline double negative_entropy(const std::vector<Matrix>& y) {
  double total = 0.0;
  for (const Matrix& yv : y)
    for (std::size_t j = 0; j < yv.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < yv.rows(); ++i) s += yv(i, j);
      s /= static_cast<double>(yv.rows());
      total += s * std::log(std::max(s, 1e-12));
    }
  return total;
}

/// Best accuracy over every injective relabelling of predicted clusters.
inline double brute_force_accuracy(const Labels& pred, const Labels& truth) {
  const int k = std::max(*std::max_element(pred.begin(), pred.end()), *std::max_element(truth.begin(), truth.end())) + 1;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hit += perm[static_cast<std::size_t>(pred[i])] == truth[i] ? 1 : 0;
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

/// ARI from the 2x2 pair-agreement table over all unordered sample pairs.
inline double pair_counting_ari(const Labels& pred, const Labels& truth) {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool sp = pred[i] == pred[j], st = truth[i] == truth[j];
      if (sp && st) a += 1.0;
      else if (sp) b += 1.0;
      else if (st) c += 1.0;
      else d += 1.0;
    }
  const double denom = (a + b) * (b + d) + (a + c) * (c + d);
  if (denom == 0.0) return 1.0;
  return 2.0 * (a * d - b * c) / denom;
}

/// I(P;T) / sqrt(H(P) H(T)) from empirical joint frequencies.
inline double nmi(const Labels& pred, const Labels& truth, bool arithmetic = false) {
  const double n = static_cast<double>(pred.size());
  auto freq = [&](auto pick) {
    std::vector<std::pair<std::pair<int, int>, double>> table;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const auto key = pick(i);
      auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
      if (it == table.end()) table.push_back({key, 1.0});
      else it->second += 1.0;
    }
    return table;
  };
  const auto joint = freq([&](std::size_t i) { return std::pair{pred[i], truth[i]}; });
  const auto mp = freq([&](std::size_t i) { return std::pair{pred[i], 0}; });
  const auto mt = freq([&](std::size_t i) { return std::pair{0, truth[i]}; });
  auto count_of = [](const auto& table, std::pair<int, int> key) {
    for (const auto& e : table)
      if (e.first == key) return e.second;
    return 0.0;
  };
  double hp = 0.0, ht = 0.0, mi = 0.0;
  for (const auto& e : mp) hp -= e.second / n * std::log(e.second / n);
  for (const auto& e : mt) ht -= e.second / n * std::log(e.second / n);
  for (const auto& e : joint) {
    const double pa = count_of(mp, {e.first.first, 0}) / n, pb = count_of(mt, {0, e.first.second}) / n;
    mi += e.second / n * std::log((e.second / n) / (pa * pb));
  }
  if (hp == 0.0 || ht == 0.0) return (hp == 0.0 && ht == 0.0) ? 1.0 : 0.0;
  return mi / (arithmetic ? 0.5 * (hp + ht) : std::sqrt(hp * ht));
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> g(0.0, sd);
  Matrix m(r, c);
  for (double& x : m.values()) x = g(rng);
  return m;
}

/// Row-stochastic matrix from a softmax of Gaussian logits.
inline Matrix random_stochastic(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m = random_matrix(r, c, rng);
  for (std::size_t i = 0; i < r; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += (m(i, j) = std::exp(m(i, j)));
    for (std::size_t j = 0; j < c; ++j) m(i, j) /= s;
  }
  return m;
}

}  // namespace imvc::oracle
