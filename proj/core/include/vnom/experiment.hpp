#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vnom/evaluation.hpp"
#include "vnom/features.hpp"
#include "vnom/matching.hpp"
#include "vnom/nomination.hpp"
#include "vnom/sbm.hpp"
#include "vnom/spectral.hpp"

namespace vnom {

enum class Scheme {
  kMl,
  kMlRestricted,
  kSpectral,           // embedding used as-is
  kSpectralProjected,  // embedding projected to the unit sphere
  kCanonical,
  kMlFeatures,
  kFeaturesOnly,       // matching on the feature term alone
};

enum class ParamMode { kKnown, kEstimated };

const char* scheme_name(Scheme s);
const char* param_mode_name(ParamMode p);
Scheme parse_scheme(const std::string& s);
ParamMode parse_param_mode(const std::string& s);

// Whether the scheme consumes model parameters (and so runs once per mode).
bool scheme_uses_parameters(Scheme s);

// A fixed observed graph with true labels, for real-data style experiments.
struct Dataset {
  std::string name;
  Graph graph;
  BlockAssignment labels;
  std::optional<FeatureSet> features;
};

// Gaussian vertex features for simulated graphs: X_v ~ N(means.row(b(v)), sd^2 I).
struct FeatureGenerator {
  Matrix means;  // K x d
  double sd = 1.0;
};

struct ExperimentConfig {
  std::optional<BlockModel> model;
  std::optional<Dataset> dataset;
  std::optional<FeatureGenerator> feature_generator;

  std::vector<Scheme> schemes{Scheme::kMl, Scheme::kMlRestricted, Scheme::kSpectralProjected,
                              Scheme::kCanonical};
  std::vector<ParamMode> param_modes{ParamMode::kKnown};
  SeedRequest seeds;
  // Uniform-all draws additionally require at least one seed per block
  // listed here (e.g. both classes present in the seed set).
  bool require_seed_in_every_block = false;
  Index trials = 200;
  std::uint64_t master_seed = 1;
  FwOptions matcher;
  SpectralOptions spectral;
  bool smoothing = true;
  bool estimate_sizes = true;
  std::optional<double> feature_weight;
  FeatureVariant feature_variant = FeatureVariant::kLogDensity;
  double canonical_limit = kCanonicalEnumerationLimit;
  // 0 = hardware concurrency.
  unsigned threads = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

struct SchemeSummary {
  Scheme scheme = Scheme::kMl;
  std::optional<ParamMode> mode;  // unset for parameter-free schemes
  Index completed = 0;
  Index failed = 0;
  std::vector<std::string> errors;  // distinct messages
  double mean_ap = 0.0;
  double se_ap = 0.0;
  bool has_ari = false;
  double mean_ari = 0.0;
  double se_ari = 0.0;
  MeanNominationCurve curve;
};

struct ExperimentReport {
  std::vector<SchemeSummary> schemes;
  double mean_chance = 0.0;  // average of u_1 / u over trials
  Index trials = 0;
  Index nonseeds = 0;
  double wall_seconds = 0.0;

  const SchemeSummary* find(Scheme s, std::optional<ParamMode> mode = std::nullopt) const;
  bool all_completed() const;
};

// Trial t draws its graph, seeds and every scheme's randomness from streams
// derived from (master_seed, t), so the report is independent of thread count.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Thread cap from VN_THREADS when set, else hardware concurrency.
unsigned default_thread_count();

// The simulation designs: q = 1 (small, t = 1, m = 4) and q = 50 (medium,
// t = 0.3, m = 20), block sizes q * (4, 3, 3).
ExperimentConfig small_simulation_config();
ExperimentConfig medium_simulation_config();

}  // namespace vnom
