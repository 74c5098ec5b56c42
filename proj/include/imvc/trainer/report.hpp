#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "imvc/datakit/io.hpp"
#include "imvc/errors.hpp"
#include "imvc/graphkit/graph.hpp"
#include "imvc/model/checkpoint.hpp"
#include "imvc/trainer/train.hpp"

namespace imvc::train {

namespace fs = std::filesystem;
using data::csv::format_double;

namespace detail {

inline std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw LoadError("cannot write " + file.string());
  return out;
}

inline double percent(double x) { return std::round(x * 10000.0) / 100.0; }

}  // namespace detail

inline void write_training_log(const fs::path& file, const std::vector<EpochLoss>& rows) {
  auto out = detail::open_out(file);
  out << "epoch,L_rec,L_sc,L_ccl,total\n";
  for (const auto& r : rows)
    out << r.epoch << ',' << format_double(r.rec) << ',' << format_double(r.sc) << ',' << format_double(r.ccl) << ','
        << format_double(r.total) << '\n';
}

inline nlohmann::json metrics_json(const MetricTriple& m) {
  return {{"acc", m.acc},
          {"nmi", m.nmi},
          {"ari", m.ari},
          {"percent", {{"acc", detail::percent(m.acc)}, {"nmi", detail::percent(m.nmi)}, {"ari", detail::percent(m.ari)}}}};
}

inline void write_metrics(const fs::path& file, const RunReport& rep) {
  nlohmann::json j;
  j["metrics"] = rep.metrics ? metrics_json(*rep.metrics) : nlohmann::json(nullptr);
  j["epochs"] = rep.losses.size();
  if (!rep.losses.empty()) {
    const auto& last = rep.losses.back();
    j["final_loss"] = {{"L_rec", last.rec}, {"L_sc", last.sc}, {"L_ccl", last.ccl}, {"total", last.total}};
  }
  j["elapsed_seconds"] = rep.elapsed_seconds;
  j["config"] = rep.config;
  auto out = detail::open_out(file);
  out << j.dump(2) << '\n';
}

/// One row per (view, sample): view and sample are 1-based, then H^v columns.
inline void write_embeddings(const fs::path& file, const std::vector<Matrix>& embeddings) {
  auto out = detail::open_out(file);
  const std::size_t width = embeddings.empty() ? 0 : embeddings.front().cols();
  out << "view,sample";
  for (std::size_t j = 0; j < width; ++j) out << ",h_" << j;
  out << '\n';
  for (std::size_t v = 0; v < embeddings.size(); ++v)
    for (std::size_t i = 0; i < embeddings[v].rows(); ++i) {
      out << v + 1 << ',' << i + 1;
      for (std::size_t j = 0; j < embeddings[v].cols(); ++j) out << ',' << format_double(embeddings[v](i, j));
      out << '\n';
    }
}

inline void write_labels(const fs::path& file, const Labels& labels) {
  auto out = detail::open_out(file);
  for (int l : labels) out << l << '\n';
}

/// Upper-triangle edge list of a weighted adjacency matrix.
inline void write_edge_list(const fs::path& file, const Matrix& adjacency) {
  auto out = detail::open_out(file);
  out << "i,j,weight\n";
  for (std::size_t i = 0; i < adjacency.rows(); ++i)
    for (std::size_t j = i; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) out << i << ',' << j << ',' << format_double(adjacency(i, j)) << '\n';
}

/// Per-run rows (kind=run) followed by one summary row per eta.
inline void write_sweep(const fs::path& file, const SweepReport& rep) {
  auto out = detail::open_out(file);
  out << "kind,eta,seed,runs,acc,nmi,ari,acc_std,nmi_std,ari_std\n";
  for (const auto& s : rep.summary) {
    for (const auto& c : rep.cells) {
      if (c.eta != s.eta) continue;
      out << "run," << format_double(c.eta) << ',' << c.seed << ",1," << format_double(c.metrics.acc) << ','
          << format_double(c.metrics.nmi) << ',' << format_double(c.metrics.ari) << ",0,0,0\n";
    }
    out << "summary," << format_double(s.eta) << ",," << s.runs << ',' << format_double(s.mean.acc) << ','
        << format_double(s.mean.nmi) << ',' << format_double(s.mean.ari) << ',' << format_double(s.stddev.acc) << ','
        << format_double(s.stddev.nmi) << ',' << format_double(s.stddev.ari) << '\n';
  }
}

struct LoadedRun {
  TrainConfig config;
  model::ModelParams params;
};

inline void save_run_checkpoint(const fs::path& file, const TrainConfig& cfg, const model::ModelParams& params,
                                const std::vector<std::size_t>& dims) {
  const nlohmann::json header = {{"config", to_json(cfg)}, {"dims", dims}, {"clusters", params.clusters()}};
  model::save_checkpoint(file, header, params);
}

/// Restores a trained model for `ds`; the dataset fixes the expected shapes.
inline LoadedRun load_run_checkpoint(const fs::path& file, const MultiViewDataset& ds) {
  const model::Checkpoint ck = model::read_checkpoint(file);
  LoadedRun run;
  try {
    run.config = config_from_json(ck.header.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint config unreadable: ") + e.what());
  }
  run.params = model::init_params(ds.dims(), ds.clusters, run.config.arch, 0);
  model::restore_params(ck.tensors, run.params);
  return run;
}

}  // namespace imvc::train
