#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "imvc/datakit/dataset.hpp"
#include "imvc/errors.hpp"
#include "imvc/losses/losses.hpp"
#include "imvc/metrics/metrics.hpp"
#include "imvc/model/forward.hpp"
#include "imvc/model/params.hpp"
#include "imvc/numkit/adam.hpp"
#include "imvc/trainer/config.hpp"

namespace imvc::train {

using data::Labels;
using data::MultiViewDataset;
using metrics::MetricTriple;
using num::Matrix;

struct EpochLoss {
  std::size_t epoch = 0;
  double rec = 0.0;
  double sc = 0.0;
  double ccl = 0.0;
  double total = 0.0;
};

struct RunReport {
  std::vector<EpochLoss> losses;
  std::optional<MetricTriple> metrics;
  double elapsed_seconds = 0.0;
  nlohmann::json config;
};

struct TrainResult {
  model::ModelParams params;
  RunReport report;
  Labels labels;
  std::vector<Matrix> embeddings;   // H^v, N x d_H
  std::vector<Matrix> assignments;  // Y^v, N x C
  data::MaskMatrix mask;
};

/// Applies the configured incomplete rate. eta = 0 keeps the dataset's own
/// mask; eta > 0 needs a complete dataset and simulates one from `seed`.
inline MultiViewDataset with_missing(const MultiViewDataset& ds, double eta, std::uint64_t seed) {
  if (eta == 0.0) return ds;
  MultiViewDataset out = ds;
  out.mask = data::simulate_missing(ds, eta, seed);
  return out;
}

inline std::uint64_t init_seed(std::uint64_t seed) { return seed + 0x9E3779B97F4A7C15ULL; }

inline model::ForwardOptions forward_options(const TrainConfig& cfg) {
  model::ForwardOptions o;
  o.hidden = cfg.arch.hidden_activation;
  o.static_graph = cfg.static_graph;
  o.bypass_propagation = !cfg.use_rec;
  return o;
}

struct Objective {
  model::ForwardState state;
  num::Var rec, sc, ccl, total;
  loss::LossReport report;
};

/// One forward pass plus every enabled loss term on `t`.
inline Objective build_objective(num::Tape& t, const model::Problem& prob, model::ModelParams& params,
                                 const TrainConfig& cfg) {
  Objective o;
  o.state = model::forward(t, prob, params, forward_options(cfg));
  const auto& s = o.state;
  if (cfg.use_rec) o.rec = loss::reconstruction_loss(s.xhat, s.present);
  if (cfg.use_sc && cfg.alpha != 0.0) {
    const num::Var target = cfg.detach_target ? num::detach(s.z) : s.z;
    const auto q = loss::pair_distribution(target);
    std::vector<loss::PairDistribution> ps;
    for (const auto& h : s.hv) ps.push_back(loss::pair_distribution(h));
    o.sc = loss::structure_consistency_loss(q, ps);
    for (const auto& p : ps) o.report.sc_per_view.push_back(loss::kl_divergence(q.probs.value(), p.probs.value()));
  }
  if (cfg.use_ccl && cfg.beta != 0.0) o.ccl = loss::contrastive_cluster_loss(s.y, cfg.tau);
  o.total = loss::total_loss(o.rec, o.sc, o.ccl, cfg.alpha, cfg.beta);

  for (std::size_t v = 0; v < s.xhat.size(); ++v) {
    const Matrix diff = s.xhat[v].value() - s.present[v].value();
    double sq = 0.0;
    for (double x : diff.values()) sq += x * x;
    o.report.rec_per_view.push_back(sq / static_cast<double>(diff.rows()));
  }
  o.report.rec = o.rec.valid() ? o.rec.scalar() : 0.0;
  o.report.sc = o.sc.valid() ? o.sc.scalar() : 0.0;
  o.report.ccl = o.ccl.valid() ? o.ccl.scalar() : 0.0;
  o.report.total = o.total.scalar();
  return o;
}

struct Prediction {
  Labels labels;
  std::vector<Matrix> embeddings;
  std::vector<Matrix> assignments;
};

inline Prediction predict(const model::Problem& prob, model::ModelParams& params, const TrainConfig& cfg) {
  num::Tape t;
  const auto s = model::forward(t, prob, params, forward_options(cfg));
  Prediction p;
  for (const auto& y : s.y) p.assignments.push_back(y.value());
  for (const auto& h : s.hv) p.embeddings.push_back(h.value());
  p.labels = metrics::final_assignment(p.assignments);
  return p;
}

/// Full-batch training: one Adam step per epoch, then the view-averaged
/// assignment of the final parameters.
inline TrainResult train(const MultiViewDataset& dataset, const TrainConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const MultiViewDataset ds = with_missing(dataset, cfg.eta, cfg.seed);
  const model::Problem prob = model::prepare_problem(ds, cfg.k, cfg.sigma);

  TrainResult result;
  result.mask = ds.mask;
  result.params = model::init_params(prob.dims(), prob.clusters, cfg.arch, init_seed(cfg.seed));
  num::Adam opt(result.params.all(), {.lr = cfg.lr});

  std::optional<EpochLoss> last_finite;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    num::Tape tape;
    Objective obj = build_objective(tape, prob, result.params, cfg);
    const EpochLoss row{epoch, obj.report.rec, obj.report.sc, obj.report.ccl, obj.report.total};
    if (!std::isfinite(row.total)) {
      std::string msg = "loss diverged at epoch " + std::to_string(epoch);
      if (last_finite)
        msg += " (last finite: epoch " + std::to_string(last_finite->epoch) + ", L_rec=" +
               std::to_string(last_finite->rec) + ", L_sc=" + std::to_string(last_finite->sc) +
               ", L_ccl=" + std::to_string(last_finite->ccl) + ", total=" + std::to_string(last_finite->total) + ")";
      throw DivergenceError(msg);
    }
    result.report.losses.push_back(row);
    last_finite = row;
    tape.backward(obj.total);
    opt.step();
  }

  Prediction pred = predict(prob, result.params, cfg);
  result.labels = std::move(pred.labels);
  result.embeddings = std::move(pred.embeddings);
  result.assignments = std::move(pred.assignments);
  if (ds.labels) result.report.metrics = metrics::evaluate_labels(result.labels, *ds.labels, cfg.nmi_norm);
  result.report.config = to_json(cfg);
  result.report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct EvalResult {
  Labels labels;
  std::optional<MetricTriple> metrics;
  std::vector<Matrix> embeddings;
};

/// Forward pass with fixed parameters; no updates. The incomplete rate and
/// seed of `cfg` reproduce the training mask on a complete dataset.
inline EvalResult evaluate(model::ModelParams& params, const TrainConfig& cfg, const MultiViewDataset& dataset) {
  const MultiViewDataset ds = with_missing(dataset, cfg.eta, cfg.seed);
  const model::Problem prob = model::prepare_problem(ds, cfg.k, cfg.sigma);
  const auto dims = prob.dims();
  if (params.clusters() != prob.clusters)
    throw CheckpointError("classifier width mismatch: expected C=" + std::to_string(prob.clusters) + ", found C=" +
                          std::to_string(params.clusters()));
  if (params.views() != dims.size())
    throw CheckpointError("view count mismatch: expected V=" + std::to_string(dims.size()) + ", found V=" +
                          std::to_string(params.views()));
  const auto expected = model::init_params(dims, prob.clusters, cfg.arch, 0);
  const auto want = expected.all();
  const auto have = params.all();
  if (want.size() != have.size())
    throw CheckpointError("checkpoint holds " + std::to_string(have.size()) + " tensors, dataset needs " +
                          std::to_string(want.size()));
  for (std::size_t k = 0; k < want.size(); ++k)
    if (!want[k]->value.same_shape(have[k]->value))
      throw CheckpointError(want[k]->name + ": expected " + want[k]->value.shape() + ", found " +
                            have[k]->value.shape());
  Prediction pred = predict(prob, params, cfg);
  EvalResult r;
  r.labels = std::move(pred.labels);
  r.embeddings = std::move(pred.embeddings);
  if (ds.labels) r.metrics = metrics::evaluate_labels(r.labels, *ds.labels, cfg.nmi_norm);
  return r;
}

struct SweepCell {
  double eta = 0.0;
  std::uint64_t seed = 0;
  MetricTriple metrics;
};

struct SweepSummary {
  double eta = 0.0;
  std::size_t runs = 0;
  MetricTriple mean;
  MetricTriple stddev;  // sample standard deviation (n − 1); 0 for a single run
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<SweepSummary> summary;
};

inline SweepSummary summarize(double eta, const std::vector<MetricTriple>& runs) {
  SweepSummary s;
  s.eta = eta;
  s.runs = runs.size();
  if (runs.empty()) return s;
  const double n = static_cast<double>(runs.size());
  for (const auto& r : runs) {
    s.mean.acc += r.acc / n;
    s.mean.nmi += r.nmi / n;
    s.mean.ari += r.ari / n;
  }
  if (runs.size() > 1) {
    for (const auto& r : runs) {
      s.stddev.acc += (r.acc - s.mean.acc) * (r.acc - s.mean.acc);
      s.stddev.nmi += (r.nmi - s.mean.nmi) * (r.nmi - s.mean.nmi);
      s.stddev.ari += (r.ari - s.mean.ari) * (r.ari - s.mean.ari);
    }
    s.stddev.acc = std::sqrt(s.stddev.acc / (n - 1.0));
    s.stddev.nmi = std::sqrt(s.stddev.nmi / (n - 1.0));
    s.stddev.ari = std::sqrt(s.stddev.ari / (n - 1.0));
  }
  return s;
}

/// Trains once per (eta, seed); each seed drives both the mask and the init.
inline SweepReport sweep_missing_rates(const MultiViewDataset& ds, const TrainConfig& base,
                                       const std::vector<double>& etas, const std::vector<std::uint64_t>& seeds) {
  if (!ds.labels) throw ParameterError("sweep_missing_rates: dataset has no labels");
  if (!ds.mask.is_complete()) throw ParameterError("sweep_missing_rates: dataset must be complete");
  SweepReport rep;
  for (double eta : etas) {
    std::vector<MetricTriple> runs;
    for (std::uint64_t seed : seeds) {
      TrainConfig cfg = base;
      cfg.eta = eta;
      cfg.seed = seed;
      const TrainResult r = train(ds, cfg);
      rep.cells.push_back({eta, seed, *r.report.metrics});
      runs.push_back(*r.report.metrics);
    }
    rep.summary.push_back(summarize(eta, runs));
  }
  return rep;
}

}  // namespace imvc::train
