#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imvc/imvc.hpp"

namespace fs = std::filesystem;
using namespace imvc;

namespace {

struct TrainArgs {
  std::string data;
  std::string out = "run";
  train::TrainConfig cfg;
  double sigma = 0.0;
  bool no_rec = false, no_sc = false, no_ccl = false;
  bool dump_graphs = false;
  bool arithmetic_nmi = false;
};

void add_config_options(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--k", a.cfg.k, "neighbours per sample in each view graph")->capture_default_str();
  cmd->add_option("--tau", a.cfg.tau, "contrastive temperature")->capture_default_str();
  cmd->add_option("--alpha", a.cfg.alpha, "weight of the structure-consistency loss")->capture_default_str();
  cmd->add_option("--beta", a.cfg.beta, "weight of the contrastive loss")->capture_default_str();
  cmd->add_option("--epochs", a.cfg.epochs, "optimizer steps (full batch)")->capture_default_str();
  cmd->add_option("--lr", a.cfg.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--sigma", a.sigma, "fixed Gaussian bandwidth (default: median distance per view)");
  cmd->add_flag("--no-rec", a.no_rec, "drop reconstruction and bypass global propagation");
  cmd->add_flag("--no-sc", a.no_sc, "drop the structure-consistency loss");
  cmd->add_flag("--no-ccl", a.no_ccl, "drop the contrastive loss");
  cmd->add_flag("--static-graph", a.cfg.static_graph, "keep fusion weights fixed at 1/V");
  cmd->add_flag("--detach-target", a.cfg.detach_target, "stop gradients through the consensus target Q");
  cmd->add_flag("--nmi-arithmetic", a.arithmetic_nmi, "normalise NMI by the arithmetic mean of entropies");
}

train::TrainConfig finish_config(const TrainArgs& a) {
  train::TrainConfig c = a.cfg;
  if (a.sigma > 0.0) c.sigma = a.sigma;
  c.use_rec = !a.no_rec;
  c.use_sc = !a.no_sc;
  c.use_ccl = !a.no_ccl;
  if (a.arithmetic_nmi) c.nmi_norm = metrics::NmiNorm::arithmetic;
  c.validate();
  return c;
}

void print_metrics(const std::optional<metrics::MetricTriple>& m) {
  if (!m) {
    std::printf("no labels: metrics skipped\n");
    return;
  }
  std::printf("ACC %.2f  NMI %.2f  ARI %.2f\n", 100.0 * m->acc, 100.0 * m->nmi, 100.0 * m->ari);
}

int run_train(const TrainArgs& a) {
  const train::TrainConfig cfg = finish_config(a);
  const auto ds = data::load_dataset(a.data);
  const auto result = train::train(ds, cfg);
  const fs::path out(a.out);
  fs::create_directories(out);
  train::write_training_log(out / "training_log.csv", result.report.losses);
  train::write_metrics(out / "metrics.json", result.report);
  train::write_embeddings(out / "embeddings.csv", result.embeddings);
  train::write_labels(out / "labels.csv", result.labels);
  train::save_run_checkpoint(out / "checkpoint.bin", cfg, result.params, ds.dims());
  if (a.dump_graphs) {
    auto masked = ds;
    masked.mask = result.mask;
    const auto prob = model::prepare_problem(masked, cfg.k, cfg.sigma);
    for (std::size_t v = 0; v < prob.views(); ++v)
      train::write_edge_list(out / ("graph_" + std::to_string(v + 1) + ".csv"), prob.expanded[v]);
    const auto& logits = result.params.fusion_logits.value.values();
    train::write_edge_list(out / "graph_fused.csv",
                           graph::fuse_graphs(prob.expanded, std::vector<double>(logits.begin(), logits.end())));
  }
  print_metrics(result.report.metrics);
  std::printf("%zu epochs in %.1fs, outputs in %s\n", result.report.losses.size(), result.report.elapsed_seconds,
              out.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incomplete multi-view clustering with graph propagation"};
  app.require_subcommand(1);

  TrainArgs targs;
  auto* train_cmd = app.add_subcommand("train", "train on a dataset directory");
  train_cmd->add_option("--data", targs.data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("--eta", targs.cfg.eta, "fraction of samples given missing views")->capture_default_str();
  train_cmd->add_option("--seed", targs.cfg.seed, "seed for the mask and the initialisation")->capture_default_str();
  train_cmd->add_option("--out", targs.out, "run directory")->capture_default_str();
  train_cmd->add_flag("--dump-graphs", targs.dump_graphs, "write per-view and fused graph edge lists");
  add_config_options(train_cmd, targs);

  TrainArgs sargs;
  std::vector<double> etas{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t seed_count = 5;
  std::uint64_t first_seed = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "train across incomplete rates and seeds");
  sweep_cmd->add_option("--data", sargs.data, "complete dataset directory")->required()->check(CLI::ExistingDirectory);
  sweep_cmd->add_option("--etas", etas, "incomplete rates")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--seeds", seed_count, "runs per rate")->capture_default_str();
  sweep_cmd->add_option("--first-seed", first_seed, "seed of the first run")->capture_default_str();
  sweep_cmd->add_option("--out", sargs.out, "output directory")->capture_default_str();
  add_config_options(sweep_cmd, sargs);

  data::SyntheticSpec spec;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic multi-view dataset");
  synth_cmd->add_option("--clusters", spec.clusters)->capture_default_str();
  synth_cmd->add_option("--views", spec.views)->capture_default_str();
  synth_cmd->add_option("--n-per-cluster", spec.per_cluster)->capture_default_str();
  synth_cmd->add_option("--dims", spec.dims, "feature width per view (default 20 each)")->delimiter(',');
  synth_cmd->add_option("--separation", spec.separation)->capture_default_str();
  synth_cmd->add_option("--noise", spec.noise)->capture_default_str();
  synth_cmd->add_option("--seed", spec.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  std::string ckpt, eval_data;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on a dataset");
  eval_cmd->add_option("--checkpoint", ckpt)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", eval_data)->required()->check(CLI::ExistingDirectory);

  std::string base_data;
  double base_eta = 0.0;
  std::uint64_t base_seed = 42;
  auto* base_cmd = app.add_subcommand("baseline", "mean-fill BSV and Concat k-means baselines");
  base_cmd->add_option("--data", base_data)->required()->check(CLI::ExistingDirectory);
  base_cmd->add_option("--eta", base_eta)->capture_default_str();
  base_cmd->add_option("--seed", base_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(targs);

    if (*sweep_cmd) {
      const train::TrainConfig cfg = finish_config(sargs);
      const auto ds = data::load_dataset(sargs.data);
      std::vector<std::uint64_t> seeds;
      for (std::size_t s = 0; s < seed_count; ++s) seeds.push_back(first_seed + s);
      const auto rep = train::sweep_missing_rates(ds, cfg, etas, seeds);
      fs::create_directories(sargs.out);
      train::write_sweep(fs::path(sargs.out) / "sweep.csv", rep);
      for (const auto& s : rep.summary)
        std::printf("eta %.2f  ACC %.2f±%.2f  NMI %.2f±%.2f  ARI %.2f±%.2f\n", s.eta, 100 * s.mean.acc,
                    100 * s.stddev.acc, 100 * s.mean.nmi, 100 * s.stddev.nmi, 100 * s.mean.ari, 100 * s.stddev.ari);
      return 0;
    }

    if (*synth_cmd) {
      data::save_dataset(data::generate_synthetic(spec), synth_out);
      std::printf("wrote %zu samples x %zu views to %s\n", spec.per_cluster * spec.clusters, spec.views,
                  synth_out.c_str());
      return 0;
    }

    if (*eval_cmd) {
      const auto ds = data::load_dataset(eval_data);
      auto run = train::load_run_checkpoint(ckpt, ds);
      const auto r = train::evaluate(run.params, run.config, ds);
      print_metrics(r.metrics);
      return 0;
    }

    if (*base_cmd) {
      const auto ds = train::with_missing(data::load_dataset(base_data), base_eta, base_seed);
      const metrics::KMeansOptions opt{.seed = base_seed};
      const auto bsv = metrics::baseline_bsv(ds, opt);
      const auto cat = metrics::baseline_concat(ds, opt);
      if (!ds.labels) {
        std::printf("no labels: BSV picked view %zu by inertia\n", bsv.chosen_view + 1);
        return 0;
      }
      std::printf("BSV (view %zu): ", bsv.chosen_view + 1);
      print_metrics(metrics::evaluate_labels(bsv.labels, *ds.labels));
      std::printf("Concat: ");
      print_metrics(metrics::evaluate_labels(cat.labels, *ds.labels));
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
