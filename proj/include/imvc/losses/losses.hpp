#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/ops.hpp"
#include "imvc/numkit/tape.hpp"

namespace imvc::loss {

using num::Matrix;
using num::Tape;
using num::Var;

inline constexpr double kProbFloor = 1e-12;

/// L_rec = (1/V) Σ_v ‖X̂^v − X̄^v‖²_F / n_v
inline Var reconstruction_loss(const std::vector<Var>& xhat, const std::vector<Var>& xbar) {
  if (xhat.empty() || xhat.size() != xbar.size())
    throw DimensionError("reconstruction_loss: need one reconstruction per view");
  Var total;
  for (std::size_t v = 0; v < xhat.size(); ++v) {
    if (!xhat[v].value().same_shape(xbar[v].value()))
      throw DimensionError("reconstruction_loss: view " + std::to_string(v) + " reconstruction " +
                           xhat[v].value().shape() + " vs data " + xbar[v].value().shape());
    Var diff = num::sub(xhat[v], xbar[v]);
    Var term = num::scale(num::sum(num::mul(diff, diff)), 1.0 / static_cast<double>(xbar[v].rows()));
    total = total.valid() ? num::add(total, term) : term;
  }
  return num::scale(total, 1.0 / static_cast<double>(xhat.size()));
}

/// Student-t affinities normalised over ordered pairs i ≠ j. The diagonal of
/// `probs` is exactly zero.
struct PairDistribution {
  Var probs;       // N x N
  Var normalizer;  // 1 x 1, Σ_{k≠l} (1 + ‖e_k − e_l‖²)^{-1}
};

inline Matrix off_diagonal_mask(std::size_t n) {
  Matrix m(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

inline PairDistribution pair_distribution(const Var& e) {
  const std::size_t n = e.rows();
  if (n < 2) throw ParameterError("pair_distribution: need at least 2 samples, got " + std::to_string(n));
  Tape& t = *e.tape();
  Var kernel = num::reciprocal(num::add_scalar(num::pairwise_sqdist(e), 1.0));
  Var masked = num::mul(kernel, t.constant(off_diagonal_mask(n)));
  Var z = num::sum(masked);
  return {num::div_scalar(masked, z), z};
}

/// Σ_v KL(Q ‖ P^v) over off-diagonal pairs, probabilities floored before logs.
inline Var structure_consistency_loss(const PairDistribution& q, const std::vector<PairDistribution>& ps) {
  if (ps.empty()) throw ParameterError("structure_consistency_loss: no view distributions");
  Var log_q = num::safe_log(q.probs, kProbFloor);
  Var total;
  for (const auto& p : ps) {
    if (!p.probs.value().same_shape(q.probs.value()))
      throw DimensionError("structure_consistency_loss: distribution shapes differ");
    Var kl = num::sum(num::mul(q.probs, num::sub(log_q, num::safe_log(p.probs, kProbFloor))));
    total = total.valid() ? num::add(total, kl) : kl;
  }
  for (double x : total.value().values())
    if (!std::isfinite(x)) throw DomainError("structure_consistency_loss: non-finite divergence");
  return total;
}

/// Plain-value KL(Q ‖ P) with the same flooring, for reporting.
inline double kl_divergence(const Matrix& q, const Matrix& p) {
  q.require_same(p, "kl_divergence");
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    s += q[k] * (std::log(std::max(q[k], kProbFloor)) - std::log(std::max(p[k], kProbFloor)));
  return s;
}

struct ContrastiveTerms {
  Var pairwise;  // (1/2C) Σ_j Σ_v Σ_{w≠v} L_j^(vw)
  Var entropy;   // Σ_j Σ_v s_j^v log s_j^v
  Var total;
};

/// Cluster-level contrast over assignment columns with the negative-entropy
/// regulariser. Cosine similarity is taken between columns; the e^{1/τ}
/// subtraction removes the anchor's own self-similarity from the denominator.
inline ContrastiveTerms contrastive_cluster_terms(const std::vector<Var>& y, double tau) {
  if (y.size() < 2) throw ParameterError("contrastive_cluster_loss: need at least 2 views");
  if (!(tau > 0.0)) throw ParameterError("contrastive_cluster_loss: temperature must be positive");
  const std::size_t nv = y.size(), c = y.front().cols(), n = y.front().rows();
  for (const Var& yv : y)
    if (yv.rows() != n || yv.cols() != c) throw DimensionError("contrastive_cluster_loss: assignment shapes differ");

  std::vector<Var> unit;
  for (const Var& yv : y) unit.push_back(num::normalize_columns(yv, kProbFloor));
  auto sim = [&](std::size_t a, std::size_t b) { return num::scale(num::matmul(num::transpose(unit[a]), unit[b]), 1.0 / tau); };

  std::vector<Var> self_sum;  // Σ_k e^{d(y_j^v, y_k^v)/τ}, C x 1
  for (std::size_t v = 0; v < nv; ++v) self_sum.push_back(num::row_sum(num::exp(sim(v, v))));

  const double self_term = std::exp(1.0 / tau);
  Var pairwise;
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = 0; w < nv; ++w) {
      if (w == v) continue;
      Var s = sim(v, w);
      Var denom = num::add_scalar(num::add(self_sum[v], num::row_sum(num::exp(s))), -self_term);
      Var l = num::sub(num::safe_log(denom, kProbFloor), num::diag(s));
      pairwise = pairwise.valid() ? num::add(pairwise, num::sum(l)) : num::sum(l);
    }
  pairwise = num::scale(pairwise, 1.0 / (2.0 * static_cast<double>(c)));

  Var entropy;
  for (std::size_t v = 0; v < nv; ++v) {
    Var s = num::scale(num::col_sum(y[v]), 1.0 / static_cast<double>(n));
    Var term = num::sum(num::mul(s, num::safe_log(s, kProbFloor)));
    entropy = entropy.valid() ? num::add(entropy, term) : term;
  }
  return {pairwise, entropy, num::add(pairwise, entropy)};
}

inline Var contrastive_cluster_loss(const std::vector<Var>& y, double tau) {
  return contrastive_cluster_terms(y, tau).total;
}

/// L = L_rec + α·L_sc + β·L_ccl; absent terms are skipped.
inline Var total_loss(const Var& rec, const Var& sc, const Var& ccl, double alpha, double beta) {
  Var total;
  auto accumulate = [&total](const Var& term) { total = total.valid() ? num::add(total, term) : term; };
  if (rec.valid()) accumulate(rec);
  if (sc.valid() && alpha != 0.0) accumulate(num::scale(sc, alpha));
  if (ccl.valid() && beta != 0.0) accumulate(num::scale(ccl, beta));
  if (!total.valid()) throw ContractError("total_loss: every term is disabled");
  return total;
}

struct LossReport {
  double rec = 0.0;
  double sc = 0.0;
  double ccl = 0.0;
  double total = 0.0;
  std::vector<double> rec_per_view;
  std::vector<double> sc_per_view;
};

}  // namespace imvc::loss
