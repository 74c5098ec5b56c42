#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/ops.hpp"
#include "imvc/numkit/tape.hpp"

namespace imvc::model {

using num::Activation;
using num::Matrix;
using num::Parameter;

/// Layer widths. The encoder ends at `latent`, shared by every view; the
/// consensus and per-view transfer GCNs share `propagation` widths.
struct Architecture {
  std::vector<std::size_t> encoder_hidden{256};
  std::size_t latent = 64;
  std::vector<std::size_t> decoder_hidden{256};
  std::vector<std::size_t> propagation{64, 64};
  std::size_t classifier_hidden = 64;
  Activation hidden_activation = Activation::relu;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct ModelParams {
  std::vector<std::vector<Parameter>> encoder;    // [view][layer]
  std::vector<std::vector<Parameter>> decoder_w;  // [view][layer]
  std::vector<std::vector<Parameter>> decoder_b;  // [view][layer], 1 x width
  std::vector<Parameter> consensus;               // [layer]
  std::vector<std::vector<Parameter>> transfer;   // [view][layer]
  Parameter fusion_logits;                        // 1 x V
  Parameter cls_w0, cls_b0, cls_w1, cls_b1;

  std::size_t views() const noexcept { return encoder.size(); }
  std::size_t clusters() const noexcept { return cls_w1.value.cols(); }

  /// Every parameter in a fixed order (checkpoint and optimizer order).
  std::vector<Parameter*> all() {
    std::vector<Parameter*> out;
    for (auto& v : encoder)
      for (auto& p : v) out.push_back(&p);
    for (std::size_t v = 0; v < decoder_w.size(); ++v)
      for (std::size_t l = 0; l < decoder_w[v].size(); ++l) {
        out.push_back(&decoder_w[v][l]);
        out.push_back(&decoder_b[v][l]);
      }
    for (auto& p : consensus) out.push_back(&p);
    for (auto& v : transfer)
      for (auto& p : v) out.push_back(&p);
    out.push_back(&fusion_logits);
    for (Parameter* p : {&cls_w0, &cls_b0, &cls_w1, &cls_b1}) out.push_back(p);
    return out;
  }
  std::vector<const Parameter*> all() const {
    std::vector<const Parameter*> out;
    for (Parameter* p : const_cast<ModelParams*>(this)->all()) out.push_back(p);
    return out;
  }
  void zero_grad() {
    for (Parameter* p : all()) p->zero_grad();
  }
};

namespace detail {

inline Matrix glorot(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-limit, limit);
  Matrix w(fan_in, fan_out);
  for (double& x : w.values()) x = u(rng);
  return w;
}

inline std::string key(const std::string& group, std::size_t a) { return group + "." + std::to_string(a); }
inline std::string key(const std::string& group, std::size_t a, std::size_t b) {
  return group + "." + std::to_string(a) + "." + std::to_string(b);
}

}  // namespace detail

/// Glorot-uniform weights, zero biases, zero fusion logits (π = 1/V).
inline ModelParams init_params(const std::vector<std::size_t>& dims, std::size_t clusters, const Architecture& arch,
                               std::uint64_t seed) {
  if (dims.empty()) throw ConfigError("init_params: no views");
  if (clusters == 0) throw ConfigError("init_params: cluster count must be positive");
  if (arch.latent == 0 || arch.classifier_hidden == 0) throw ConfigError("init_params: zero layer width");
  std::mt19937_64 rng(seed);
  ModelParams p;
  const std::size_t nv = dims.size();
  p.encoder.resize(nv);
  p.decoder_w.resize(nv);
  p.decoder_b.resize(nv);
  p.transfer.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<std::size_t> enc{dims[v]};
    enc.insert(enc.end(), arch.encoder_hidden.begin(), arch.encoder_hidden.end());
    enc.push_back(arch.latent);
    for (std::size_t l = 0; l + 1 < enc.size(); ++l)
      p.encoder[v].emplace_back(detail::key("encoder", v, l), detail::glorot(enc[l], enc[l + 1], rng));

    std::vector<std::size_t> dec{arch.latent};
    dec.insert(dec.end(), arch.decoder_hidden.begin(), arch.decoder_hidden.end());
    dec.push_back(dims[v]);
    for (std::size_t l = 0; l + 1 < dec.size(); ++l) {
      p.decoder_w[v].emplace_back(detail::key("decoder_w", v, l), detail::glorot(dec[l], dec[l + 1], rng));
      p.decoder_b[v].emplace_back(detail::key("decoder_b", v, l), Matrix(1, dec[l + 1]));
    }
  }
  std::vector<std::size_t> prop{arch.latent};
  prop.insert(prop.end(), arch.propagation.begin(), arch.propagation.end());
  for (std::size_t l = 0; l + 1 < prop.size(); ++l)
    p.consensus.emplace_back(detail::key("consensus", l), detail::glorot(prop[l], prop[l + 1], rng));
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t l = 0; l + 1 < prop.size(); ++l)
      p.transfer[v].emplace_back(detail::key("transfer", v, l), detail::glorot(prop[l], prop[l + 1], rng));

  p.fusion_logits = Parameter("fusion_logits", Matrix(1, nv));
  const std::size_t h = prop.back();
  p.cls_w0 = Parameter("classifier_w0", detail::glorot(h, arch.classifier_hidden, rng));
  p.cls_b0 = Parameter("classifier_b0", Matrix(1, arch.classifier_hidden));
  p.cls_w1 = Parameter("classifier_w1", detail::glorot(arch.classifier_hidden, clusters, rng));
  p.cls_b1 = Parameter("classifier_b1", Matrix(1, clusters));
  return p;
}

}  // namespace imvc::model
