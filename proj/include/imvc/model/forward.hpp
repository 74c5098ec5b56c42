#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/graphkit/graph.hpp"
#include "imvc/model/params.hpp"
#include "imvc/numkit/ops.hpp"
#include "imvc/numkit/tape.hpp"

namespace imvc::model {

using num::Tape;
using num::Var;

/// Everything derived from the data once, before training: present-sample
/// matrices, local graphs, expanded graphs and per-sample view counts.
struct Problem {
  std::size_t samples = 0;
  std::size_t clusters = 0;
  data::MaskMatrix mask;
  std::vector<data::IndicatorMatrix> indicators;
  std::vector<Matrix> present;       // X̄^v, n_v x d_v
  std::vector<graph::ViewGraph> local;
  std::vector<Matrix> local_norm;    // normalized Ā^v
  std::vector<Matrix> expanded;      // A^v, N x N
  std::vector<double> inv_view_count;  // 1 / T_i
  Matrix static_global_norm;         // normalized mean of A^v (π = 1/V)

  std::size_t views() const noexcept { return present.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& x : present) d.push_back(x.cols());
    return d;
  }
};

inline Problem prepare_problem(const data::MultiViewDataset& ds, std::size_t k,
                               std::optional<double> sigma = std::nullopt) {
  ds.validate();
  Problem p;
  p.samples = ds.samples();
  p.clusters = ds.clusters;
  p.mask = ds.mask;
  for (std::size_t v = 0; v < ds.view_count(); ++v) {
    auto f = data::build_indicator(ds.mask, v);
    Matrix xbar = data::extract_present(ds.views[v], f);
    if (k >= f.present())
      throw ParameterError("view " + std::to_string(v + 1) + " has " + std::to_string(f.present()) +
                           " present samples, too few for K = " + std::to_string(k));
    graph::ViewGraph g = graph::build_view_graph(xbar, k, sigma);
    p.local_norm.push_back(graph::normalize_adjacency(g.adjacency));
    p.expanded.push_back(graph::expand_graph(g.adjacency, f));
    p.local.push_back(std::move(g));
    p.present.push_back(std::move(xbar));
    p.indicators.push_back(std::move(f));
  }
  p.inv_view_count.resize(p.samples);
  for (std::size_t i = 0; i < p.samples; ++i)
    p.inv_view_count[i] = 1.0 / static_cast<double>(ds.mask.row_count(i));
  p.static_global_norm =
      graph::normalize_adjacency(graph::fuse_graphs(p.expanded, std::vector<double>(p.views(), 0.0)));
  return p;
}

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

/// Stacked GCN on the local graph: Z_(l) = σ(Â^v Z_(l−1) W_(l)); last layer linear.
inline Var encode_view(const Var& xbar, const Var& local_norm, const std::vector<Var>& weights,
                       Activation hidden = Activation::relu) {
  if (weights.empty()) throw ConfigError("encode_view: no layers");
  if (weights.front().rows() != xbar.cols())
    throw DimensionError("encode_view: input width " + std::to_string(xbar.cols()) + " but first layer expects " +
                         std::to_string(weights.front().rows()));
  Var z = xbar;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    z = num::propagate(local_norm, num::matmul(z, weights[l]));
    if (l + 1 < weights.size()) z = num::activate(hidden, z);
  }
  return z;
}

/// Z_i = Σ_v Z^v_i / T_i over the expanded (zero-filled) view latents.
inline Var fuse_consensus(const std::vector<Var>& expanded, const std::vector<double>& inv_view_count) {
  if (expanded.empty()) throw ContractError("fuse_consensus: no views");
  Var acc = expanded.front();
  for (std::size_t v = 1; v < expanded.size(); ++v) acc = num::add(acc, expanded[v]);
  return num::scale_rows(acc, inv_view_count);
}

inline Var fuse_consensus(const std::vector<Var>& expanded, const data::MaskMatrix& mask) {
  std::vector<double> inv(mask.samples());
  for (std::size_t i = 0; i < mask.samples(); ++i) {
    const std::size_t t = mask.row_count(i);
    if (t == 0) throw ContractError("fuse_consensus: sample " + std::to_string(i) + " is absent from every view");
    inv[i] = 1.0 / static_cast<double>(t);
  }
  return fuse_consensus(expanded, inv);
}

/// H_(l) = σ(Â H_(l−1) W_(l)), H_(0) = Z. Returns H_(1..L); last layer linear.
inline std::vector<Var> consensus_gcn_layers(const Var& z, const Var& global_norm, const std::vector<Var>& weights,
                                             Activation hidden = Activation::relu) {
  std::vector<Var> out;
  Var h = z;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != h.cols())
      throw DimensionError("consensus_gcn_layers: layer " + std::to_string(l) + " expects width " +
                           std::to_string(weights[l].rows()) + ", got " + std::to_string(h.cols()));
    h = num::propagate(global_norm, num::matmul(h, weights[l]));
    if (l + 1 < weights.size()) h = num::activate(hidden, h);
    out.push_back(h);
  }
  return out;
}

/// Same-layer transfer: H^v_(l) = σ(Â · ½(H^v_(l−1) + H_(l−1)) · W^v_(l)),
/// with H^v_(0) = Z^v and H_(0) = Z. `consensus` holds H_(1..).
inline Var hierarchical_transfer(const Var& zv, const Var& z, const std::vector<Var>& consensus, const Var& global_norm,
                                 const std::vector<Var>& weights, Activation hidden = Activation::relu) {
  if (weights.empty()) throw ConfigError("hierarchical_transfer: no layers");
  if (consensus.size() + 1 < weights.size())
    throw ConfigError("hierarchical_transfer: " + std::to_string(weights.size()) + " branch layers but only " +
                      std::to_string(consensus.size()) + " consensus layers");
  Var h = zv;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Var& shared = l == 0 ? z : consensus[l - 1];
    if (!h.value().same_shape(shared.value()))
      throw DimensionError("hierarchical_transfer: layer " + std::to_string(l) + " branch " + h.value().shape() +
                           " vs consensus " + shared.value().shape());
    Var mixed = num::scale(num::add(h, shared), 0.5);
    h = num::propagate(global_norm, num::matmul(mixed, weights[l]));
    if (l + 1 < weights.size()) h = num::activate(hidden, h);
  }
  return h;
}

/// Fully-connected decoder; hidden layers use `hidden`, output is linear.
inline Var decode_view(const Var& zbar, const std::vector<Var>& weights, const std::vector<Var>& biases,
                       std::size_t out_dim, Activation hidden = Activation::relu) {
  if (weights.empty() || weights.size() != biases.size()) throw ConfigError("decode_view: malformed layer list");
  if (weights.back().cols() != out_dim)
    throw ConfigError("decode_view: decoder emits width " + std::to_string(weights.back().cols()) +
                      ", view has " + std::to_string(out_dim));
  Var x = zbar;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    x = num::add_row_bias(num::matmul(x, weights[l]), biases[l]);
    if (l + 1 < weights.size()) x = num::activate(hidden, x);
  }
  return x;
}

/// Y^v = softmax(ReLU(H^v W0 + b0) W1 + b1), the same weights for every view.
inline Var classify(const Var& hv, const Var& w0, const Var& b0, const Var& w1, const Var& b1) {
  Var hidden = num::relu(num::add_row_bias(num::matmul(hv, w0), b0));
  return num::softmax_rows(num::add_row_bias(num::matmul(hidden, w1), b1));
}

// ---------------------------------------------------------------------------
// Full forward pass
// ---------------------------------------------------------------------------

struct ForwardOptions {
  Activation hidden = Activation::relu;
  bool static_graph = false;         // Â fixed at π = 1/V
  bool bypass_propagation = false;   // H^v = Z^v, no consensus/transfer GCN
};

/// Tape handles for every parameter of one step.
struct BoundParams {
  std::vector<std::vector<Var>> encoder, decoder_w, decoder_b, transfer;
  std::vector<Var> consensus;
  Var fusion_logits, cls_w0, cls_b0, cls_w1, cls_b1;
};

inline BoundParams bind(Tape& t, ModelParams& p) {
  BoundParams b;
  auto bind_all = [&t](std::vector<std::vector<Parameter>>& src) {
    std::vector<std::vector<Var>> out(src.size());
    for (std::size_t v = 0; v < src.size(); ++v)
      for (auto& q : src[v]) out[v].push_back(t.parameter(q));
    return out;
  };
  b.encoder = bind_all(p.encoder);
  b.decoder_w = bind_all(p.decoder_w);
  b.decoder_b = bind_all(p.decoder_b);
  b.transfer = bind_all(p.transfer);
  for (auto& q : p.consensus) b.consensus.push_back(t.parameter(q));
  b.fusion_logits = t.parameter(p.fusion_logits);
  b.cls_w0 = t.parameter(p.cls_w0);
  b.cls_b0 = t.parameter(p.cls_b0);
  b.cls_w1 = t.parameter(p.cls_w1);
  b.cls_b1 = t.parameter(p.cls_b1);
  return b;
}

struct ForwardState {
  std::vector<Var> present;    // X̄^v (constants)
  std::vector<Var> zbar;       // Z̄^v
  std::vector<Var> zexp;       // Z^v
  Var z;                       // consensus
  std::vector<Var> consensus;  // H_(1..L)
  std::vector<Var> hv;         // H^v
  std::vector<Var> xhat;       // X̂^v
  std::vector<Var> y;          // Y^v
  Var global_norm;             // Â
};

inline ForwardState forward(Tape& t, const Problem& prob, ModelParams& params, const ForwardOptions& opt = {}) {
  if (params.views() != prob.views())
    throw ConfigError("forward: parameters for " + std::to_string(params.views()) + " views, data has " +
                      std::to_string(prob.views()));
  const BoundParams b = bind(t, params);
  ForwardState s;
  const std::size_t nv = prob.views();
  for (std::size_t v = 0; v < nv; ++v) {
    s.present.push_back(t.constant(prob.present[v]));
    Var a_local = t.constant(prob.local_norm[v]);
    s.zbar.push_back(encode_view(s.present[v], a_local, b.encoder[v], opt.hidden));
    s.zexp.push_back(num::scatter_rows(s.zbar[v], prob.indicators[v].index, prob.samples));
    s.xhat.push_back(decode_view(s.zbar[v], b.decoder_w[v], b.decoder_b[v], prob.present[v].cols(), opt.hidden));
  }
  s.z = fuse_consensus(s.zexp, prob.inv_view_count);

  if (opt.bypass_propagation) {
    s.hv = s.zexp;
  } else {
    if (opt.static_graph) {
      s.global_norm = t.constant(prob.static_global_norm);
    } else {
      std::vector<Var> graphs;
      for (const auto& a : prob.expanded) graphs.push_back(t.constant(a));
      s.global_norm = graph::normalize_adjacency(graph::fuse_graphs(graphs, b.fusion_logits));
    }
    s.consensus = consensus_gcn_layers(s.z, s.global_norm, b.consensus, opt.hidden);
    for (std::size_t v = 0; v < nv; ++v)
      s.hv.push_back(hierarchical_transfer(s.zexp[v], s.z, s.consensus, s.global_norm, b.transfer[v], opt.hidden));
  }
  for (std::size_t v = 0; v < nv; ++v) s.y.push_back(classify(s.hv[v], b.cls_w0, b.cls_b0, b.cls_w1, b.cls_b1));
  return s;
}

}  // namespace imvc::model
