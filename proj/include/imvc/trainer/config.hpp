#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "imvc/errors.hpp"
#include "imvc/metrics/metrics.hpp"
#include "imvc/model/params.hpp"

namespace imvc::train {

struct TrainConfig {
  std::size_t k = 10;
  double tau = 0.5;
  double alpha = 10.0;
  double beta = 10.0;
  std::size_t epochs = 200;
  double lr = 1e-3;
  std::uint64_t seed = 42;
  double eta = 0.0;
  std::optional<double> sigma;  // empty: median heuristic per view
  model::Architecture arch;
  bool use_rec = true;
  bool use_sc = true;
  bool use_ccl = true;
  bool static_graph = false;
  bool detach_target = false;
  metrics::NmiNorm nmi_norm = metrics::NmiNorm::geometric;

  void validate() const {
    if (k == 0) throw ParameterError("K must be positive");
    if (!(tau > 0.0)) throw ParameterError("tau must be positive");
    if (alpha < 0.0 || beta < 0.0) throw ParameterError("alpha and beta must be non-negative");
    if (epochs == 0) throw ParameterError("epochs must be at least 1");
    if (!(lr > 0.0)) throw ParameterError("learning rate must be positive");
    if (!(eta >= 0.0) || eta >= 1.0) throw ParameterError("eta must lie in [0, 1)");
    if (sigma && !(*sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (arch.propagation.empty()) throw ConfigError("propagation GCN needs at least one layer");
    if (!use_rec && arch.latent != arch.propagation.back())
      throw ConfigError("bypassing propagation requires latent width == final propagation width");
    if (!use_rec && !use_ccl && (!use_sc || alpha == 0.0)) throw ConfigError("every loss term is disabled");
  }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["k"] = c.k;
  j["tau"] = c.tau;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["epochs"] = c.epochs;
  j["lr"] = c.lr;
  j["seed"] = c.seed;
  j["eta"] = c.eta;
  j["sigma"] = c.sigma ? nlohmann::json(*c.sigma) : nlohmann::json(nullptr);
  j["use_rec"] = c.use_rec;
  j["use_sc"] = c.use_sc;
  j["use_ccl"] = c.use_ccl;
  j["static_graph"] = c.static_graph;
  j["detach_target"] = c.detach_target;
  j["nmi_norm"] = c.nmi_norm == metrics::NmiNorm::geometric ? "geometric" : "arithmetic";
  j["arch"] = {{"encoder_hidden", c.arch.encoder_hidden},
               {"latent", c.arch.latent},
               {"decoder_hidden", c.arch.decoder_hidden},
               {"propagation", c.arch.propagation},
               {"classifier_hidden", c.arch.classifier_hidden},
               {"hidden_activation", num::to_string(c.arch.hidden_activation)}};
  return j;
}

inline TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.k = j.at("k").get<std::size_t>();
  c.tau = j.at("tau").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.lr = j.at("lr").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.eta = j.at("eta").get<double>();
  if (!j.at("sigma").is_null()) c.sigma = j.at("sigma").get<double>();
  c.use_rec = j.at("use_rec").get<bool>();
  c.use_sc = j.at("use_sc").get<bool>();
  c.use_ccl = j.at("use_ccl").get<bool>();
  c.static_graph = j.at("static_graph").get<bool>();
  c.detach_target = j.at("detach_target").get<bool>();
  c.nmi_norm = j.at("nmi_norm").get<std::string>() == "arithmetic" ? metrics::NmiNorm::arithmetic
                                                                   : metrics::NmiNorm::geometric;
  const auto& a = j.at("arch");
  c.arch.encoder_hidden = a.at("encoder_hidden").get<std::vector<std::size_t>>();
  c.arch.latent = a.at("latent").get<std::size_t>();
  c.arch.decoder_hidden = a.at("decoder_hidden").get<std::vector<std::size_t>>();
  c.arch.propagation = a.at("propagation").get<std::vector<std::size_t>>();
  c.arch.classifier_hidden = a.at("classifier_hidden").get<std::size_t>();
  c.arch.hidden_activation = num::parse_activation(a.at("hidden_activation").get<std::string>());
  return c;
}

}  // namespace imvc::train
