#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "imvc/errors.hpp"
#include "imvc/model/forward.hpp"
#include "imvc/model/params.hpp"
#include "imvc/trainer/train.hpp"
#include "support/model_check.hpp"
#include "support/oracles.hpp"

using namespace imvc;
using num::Matrix;
using num::Tape;
using num::Var;

namespace {

void jitter(model::ModelParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  for (double& x : p.fusion_logits.value.values()) x = g(rng);
  for (auto* b : {&p.cls_b0, &p.cls_b1})
    for (double& x : b->value.values()) x = g(rng);
  for (auto& v : p.decoder_b)
    for (auto& b : v)
      for (double& x : b.value.values()) x = g(rng);
}

data::MultiViewDataset permuted(const data::MultiViewDataset& ds, const std::vector<std::size_t>& perm) {
  data::MultiViewDataset out = ds;
  for (std::size_t v = 0; v < ds.view_count(); ++v)
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t k = 0; k < ds.views[v].cols(); ++k) out.views[v](i, k) = ds.views[v](perm[i], k);
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t v = 0; v < ds.view_count(); ++v) out.mask.set(i, v, ds.mask.present(perm[i], v));
  if (ds.labels)
    for (std::size_t i = 0; i < perm.size(); ++i) (*out.labels)[i] = (*ds.labels)[perm[i]];
  return out;
}

data::MultiViewDataset small_synthetic(double eta, std::uint64_t seed) {
  data::SyntheticSpec s;
  s.per_cluster = 8;
  s.dims = {6, 7, 5};
  s.seed = seed;
  return train::with_missing(data::generate_synthetic(s), eta, seed);
}

}  // namespace

TEST(ModelParams, ShapesFollowArchitecture) {
  const auto cfg = check::tiny_config();
  const auto p = model::init_params({4, 5}, 2, cfg.arch, 1);
  ASSERT_EQ(p.views(), 2u);
  EXPECT_EQ(p.encoder[1].front().value.rows(), 5u);
  EXPECT_EQ(p.encoder[1].back().value.cols(), 3u);
  EXPECT_EQ(p.decoder_w[0].back().value.cols(), 4u);
  EXPECT_EQ(p.consensus.size(), 2u);
  EXPECT_EQ(p.transfer[0].back().value.cols(), 3u);
  EXPECT_EQ(p.fusion_logits.value.cols(), 2u);
  EXPECT_EQ(p.clusters(), 2u);
  EXPECT_EQ(p.all().size(), 2u * 2 + 2u * 4 + 2 + 2u * 2 + 1 + 4);
}

TEST(ModelParams, InitIsSeeded) {
  const model::Architecture arch;
  const auto a = model::init_params({4, 5}, 3, arch, 7), b = model::init_params({4, 5}, 3, arch, 7);
  const auto c = model::init_params({4, 5}, 3, arch, 8);
  EXPECT_EQ(a.encoder[0][0].value, b.encoder[0][0].value);
  EXPECT_NE(a.encoder[0][0].value, c.encoder[0][0].value);
  EXPECT_THROW(model::init_params({}, 3, arch, 0), ConfigError);
  EXPECT_THROW(model::init_params({4}, 0, arch, 0), ConfigError);
}

TEST(Forward, OutputShapesAndRowStochasticAssignments) {
  const auto ds = small_synthetic(0.5, 3);
  const auto cfg = check::tiny_config();
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 5);
  Tape t;
  const auto s = model::forward(t, prob, params);
  ASSERT_EQ(s.y.size(), 3u);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_EQ(s.hv[v].rows(), ds.samples());
    EXPECT_EQ(s.xhat[v].value().rows(), ds.mask.view_count(v));
    EXPECT_EQ(s.xhat[v].value().cols(), ds.views[v].cols());
    for (std::size_t i = 0; i < ds.samples(); ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < 3; ++j) r += s.y[v].value()(i, j);
      EXPECT_NEAR(r, 1.0, 1e-12);
    }
  }
}

TEST(Forward, ConsensusMatchesScalarLoop) {
  const auto ds = small_synthetic(0.7, 4);
  const auto cfg = check::tiny_config();
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 6);
  Tape t;
  const auto s = model::forward(t, prob, params);
  std::vector<Matrix> zbar;
  for (const auto& z : s.zbar) zbar.push_back(z.value());
  const Matrix want = oracle::consensus(zbar, ds.mask);
  const Matrix& got = s.z.value();
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-10);
}

TEST(Forward, ExpandedGraphsAreZeroAtMissingSamples) {
  const auto ds = small_synthetic(0.7, 5);
  const auto prob = model::prepare_problem(ds, 3);
  for (std::size_t v = 0; v < prob.views(); ++v)
    for (std::size_t i = 0; i < ds.samples(); ++i) {
      if (ds.mask.present(i, v)) continue;
      for (std::size_t j = 0; j < ds.samples(); ++j) {
        EXPECT_EQ(prob.expanded[v](i, j), 0.0);
        EXPECT_EQ(prob.expanded[v](j, i), 0.0);
      }
    }
}

TEST(Forward, PermutationEquivariance) {
  const auto ds = small_synthetic(0.5, 6);
  const auto cfg = check::tiny_config();
  std::vector<std::size_t> perm(ds.samples());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(7);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto pds = permuted(ds, perm);

  const auto prob = model::prepare_problem(ds, cfg.k), pprob = model::prepare_problem(pds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 8);
  jitter(params, 9);
  Tape t1, t2;
  const auto a = model::forward(t1, prob, params), b = model::forward(t2, pprob, params);
  for (std::size_t v = 0; v < prob.views(); ++v)
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = 0; j < ds.clusters; ++j) {
        EXPECT_NEAR(b.y[v].value()(i, j), a.y[v].value()(perm[i], j), 1e-10);
        EXPECT_NEAR(b.hv[v].value()(i, 0), a.hv[v].value()(perm[i], 0), 1e-10);
      }
}

TEST(Forward, FullObjectiveGradientMatchesFiniteDifferences) {
  const auto ds = check::tiny_dataset(11);
  const auto cfg = check::tiny_config();
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 12);
  jitter(params, 13);
  const auto rep = check::check_model_gradients(prob, params, cfg);
  EXPECT_LT(rep.max_rel, 1e-4) << "worst " << rep.worst;
}

TEST(Forward, AblationGradientsMatchFiniteDifferences) {
  const auto ds = check::tiny_dataset(14);
  for (int mode = 0; mode < 3; ++mode) {
    auto cfg = check::tiny_config();
    if (mode == 0) cfg.static_graph = true;
    if (mode == 1) cfg.use_sc = false;
    if (mode == 2) {
      cfg.use_rec = false;
      cfg.arch.latent = 3;
    }
    const auto prob = model::prepare_problem(ds, cfg.k);
    auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 15);
    jitter(params, 16);
    const auto rep = check::check_model_gradients(prob, params, cfg);
    EXPECT_LT(rep.max_rel, 1e-4) << "mode " << mode << " worst " << rep.worst;
  }
}

TEST(Forward, ReconstructionOnlyLeavesPropagationUntouched) {
  const auto ds = check::tiny_dataset(17);
  auto cfg = check::tiny_config();
  cfg.use_sc = false;
  cfg.use_ccl = false;
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 18);
  Tape t;
  auto obj = train::build_objective(t, prob, params, cfg);
  t.backward(obj.total);
  auto all_zero = [](const Matrix& g) {
    for (double x : g.values())
      if (x != 0.0) return false;
    return true;
  };
  for (const auto& w : params.consensus) EXPECT_TRUE(all_zero(w.grad)) << w.name;
  for (const auto& v : params.transfer)
    for (const auto& w : v) EXPECT_TRUE(all_zero(w.grad)) << w.name;
  EXPECT_TRUE(all_zero(params.fusion_logits.grad));
  EXPECT_TRUE(all_zero(params.cls_w1.grad));
  EXPECT_FALSE(all_zero(params.encoder[0][0].grad));
}

TEST(Forward, StaticGraphFreezesFusionLogits) {
  const auto ds = check::tiny_dataset(19);
  auto cfg = check::tiny_config();
  cfg.static_graph = true;
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto params = model::init_params(prob.dims(), prob.clusters, cfg.arch, 20);
  Tape t;
  auto obj = train::build_objective(t, prob, params, cfg);
  t.backward(obj.total);
  for (double x : params.fusion_logits.grad.values()) EXPECT_EQ(x, 0.0);
}

TEST(Forward, ShapeAndConfigErrors) {
  const auto ds = check::tiny_dataset(21);
  const auto cfg = check::tiny_config();
  const auto prob = model::prepare_problem(ds, cfg.k);
  auto wrong_views = model::init_params({4}, 2, cfg.arch, 1);
  Tape t;
  EXPECT_THROW(model::forward(t, prob, wrong_views), ConfigError);
  auto wrong_dims = model::init_params({4, 6}, 2, cfg.arch, 1);
  EXPECT_THROW(model::forward(t, prob, wrong_dims), DimensionError);
  EXPECT_THROW(model::prepare_problem(ds, 5), ParameterError);

  auto bad = check::tiny_config();
  bad.use_rec = false;
  bad.arch.latent = 7;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = check::tiny_config();
  bad.use_rec = bad.use_sc = bad.use_ccl = false;
  EXPECT_THROW(bad.validate(), ConfigError);
}
