#include <gtest/gtest.h>

#include "vnom/experiment.hpp"

namespace vnom {
namespace {

void expect_same(const ExperimentReport& a, const ExperimentReport& b) {
  ASSERT_EQ(a.schemes.size(), b.schemes.size());
  EXPECT_EQ(a.mean_chance, b.mean_chance);
  for (std::size_t s = 0; s < a.schemes.size(); ++s) {
    const SchemeSummary& x = a.schemes[s];
    const SchemeSummary& y = b.schemes[s];
    EXPECT_EQ(x.scheme, y.scheme);
    EXPECT_EQ(x.mode, y.mode);
    EXPECT_EQ(x.completed, y.completed);
    EXPECT_EQ(x.mean_ap, y.mean_ap);
    EXPECT_EQ(x.se_ap, y.se_ap);
    EXPECT_EQ(x.mean_ari, y.mean_ari);
    EXPECT_EQ(x.curve.prob, y.curve.prob);
  }
}

ExperimentConfig tiny_config() {
  ExperimentConfig c = small_simulation_config();
  c.trials = 12;
  c.master_seed = 99;
  return c;
}

TEST(SchemeNames, RoundTrip) {
  for (Scheme s : {Scheme::kMl, Scheme::kMlRestricted, Scheme::kSpectral, Scheme::kSpectralProjected,
                   Scheme::kCanonical, Scheme::kMlFeatures, Scheme::kFeaturesOnly}) {
    EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  }
  EXPECT_EQ(parse_param_mode(param_mode_name(ParamMode::kEstimated)), ParamMode::kEstimated);
  EXPECT_THROW(parse_scheme("nope"), std::invalid_argument);
  EXPECT_FALSE(scheme_uses_parameters(Scheme::kSpectral));
  EXPECT_TRUE(scheme_uses_parameters(Scheme::kCanonical));
}

TEST(DeriveStream, DistinctKeysDiffer) {
  Rng a = derive_stream(1, 0, 0), b = derive_stream(1, 0, 1), c = derive_stream(1, 1, 0), d = derive_stream(1, 0, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(x, d());
}

TEST(Presets, SimulationDesigns) {
  const ExperimentConfig small = small_simulation_config();
  ASSERT_TRUE(small.model);
  EXPECT_EQ(small.model->block_sizes(), (std::vector<Index>{4, 3, 3}));
  EXPECT_EQ(small.seeds.total, 4);
  EXPECT_EQ(small.trials, 200);
  const ExperimentConfig medium = medium_simulation_config();
  EXPECT_EQ(medium.model->block_sizes(), (std::vector<Index>{200, 150, 150}));
  EXPECT_EQ(medium.seeds.total, 20);
  EXPECT_LT((medium.model->lambda() - simulation_lambda(0.3)).norm(), 1e-15);
}

TEST(Validate, RejectsBadConfigs) {
  ExperimentConfig c = tiny_config();
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny_config();
  c.schemes.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny_config();
  c.seeds.total = 11;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny_config();
  c.schemes = {Scheme::kMlFeatures};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = tiny_config();
  c.model.reset();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(tiny_config().validate());
}

TEST(RunExperiment, ReproducibleAcrossRunsAndThreadCounts) {
  ExperimentConfig c = tiny_config();
  c.threads = 1;
  const ExperimentReport one = run_experiment(c);
  const ExperimentReport again = run_experiment(c);
  c.threads = 4;
  const ExperimentReport four = run_experiment(c);
  expect_same(one, again);
  expect_same(one, four);
  EXPECT_TRUE(one.all_completed());
  EXPECT_EQ(one.trials, 12);
  EXPECT_EQ(one.nonseeds, 6);
}

TEST(RunExperiment, SlotsPerSchemeAndMode) {
  const ExperimentReport r = run_experiment(tiny_config());
  // ml, ml_r, can in two modes; sp_proj once.
  EXPECT_EQ(r.schemes.size(), 7u);
  ASSERT_NE(r.find(Scheme::kSpectralProjected), nullptr);
  EXPECT_FALSE(r.find(Scheme::kSpectralProjected)->mode.has_value());
  ASSERT_NE(r.find(Scheme::kMl, ParamMode::kKnown), nullptr);
  EXPECT_TRUE(r.find(Scheme::kMl, ParamMode::kKnown)->has_ari);
  EXPECT_FALSE(r.find(Scheme::kCanonical, ParamMode::kKnown)->has_ari);
  for (const auto& s : r.schemes) {
    EXPECT_GE(s.mean_ap, 0.0);
    EXPECT_LE(s.mean_ap, 1.0);
    EXPECT_EQ(s.curve.prob.size(), 6u);
  }
}

TEST(RunExperiment, CanonicalGuardFailsSchemeOnly) {
  ExperimentConfig c = tiny_config();
  c.canonical_limit = 10.0;
  const ExperimentReport r = run_experiment(c);
  const SchemeSummary* can = r.find(Scheme::kCanonical, ParamMode::kKnown);
  ASSERT_NE(can, nullptr);
  EXPECT_EQ(can->completed, 0);
  EXPECT_EQ(can->failed, 12);
  EXPECT_FALSE(can->errors.empty());
  EXPECT_FALSE(r.all_completed());
  EXPECT_EQ(r.find(Scheme::kMl, ParamMode::kKnown)->completed, 12);
}

TEST(RunExperiment, FeatureSchemes) {
  ExperimentConfig c;
  c.model = BlockModel({10, 10}, Matrix::Constant(2, 2, 0.5));
  FeatureGenerator gen;
  gen.means = Matrix(2, 1);
  gen.means << 0.0, 6.0;
  c.feature_generator = gen;
  c.schemes = {Scheme::kMl, Scheme::kMlFeatures, Scheme::kFeaturesOnly};
  c.seeds = SeedRequest{SeedPolicy::kStratified, 0, {3, 3}, 0};
  c.trials = 10;
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.all_completed());
  ASSERT_NE(r.find(Scheme::kFeaturesOnly), nullptr);
  EXPECT_GE(r.find(Scheme::kMlFeatures, ParamMode::kKnown)->mean_ap, 0.9);
  EXPECT_GE(r.find(Scheme::kFeaturesOnly)->mean_ap, 0.9);
}

TEST(RunExperiment, DatasetSource) {
  Graph g(8);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = i + 1; j < 4; ++j) {
      g.set_edge(i, j);
      g.set_edge(i + 4, j + 4);
    }
  }
  ExperimentConfig c;
  c.dataset = Dataset{"cliques", g, BlockAssignment::contiguous(std::vector<Index>{4, 4}), std::nullopt};
  c.schemes = {Scheme::kSpectralProjected, Scheme::kMlRestricted};
  c.param_modes = {ParamMode::kEstimated};
  c.seeds = SeedRequest{SeedPolicy::kUniformAll, 3, {}, 0};
  c.require_seed_in_every_block = true;
  c.trials = 5;
  const ExperimentReport r = run_experiment(c);
  EXPECT_TRUE(r.all_completed());
  EXPECT_EQ(r.find(Scheme::kSpectralProjected)->mean_ap, 1.0);
}

}  // namespace
}  // namespace vnom
