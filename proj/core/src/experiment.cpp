#include "vnom/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace vnom {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kMl: return "ml";
    case Scheme::kMlRestricted: return "ml_r";
    case Scheme::kSpectral: return "sp";
    case Scheme::kSpectralProjected: return "sp_proj";
    case Scheme::kCanonical: return "can";
    case Scheme::kMlFeatures: return "ml_f";
    case Scheme::kFeaturesOnly: return "features";
  }
  return "?";
}

const char* param_mode_name(ParamMode p) { return p == ParamMode::kKnown ? "known" : "estimated"; }

Scheme parse_scheme(const std::string& s) {
  for (Scheme x : {Scheme::kMl, Scheme::kMlRestricted, Scheme::kSpectral, Scheme::kSpectralProjected,
                   Scheme::kCanonical, Scheme::kMlFeatures, Scheme::kFeaturesOnly})
    if (s == scheme_name(x)) return x;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

ParamMode parse_param_mode(const std::string& s) {
  if (s == "known") return ParamMode::kKnown;
  if (s == "estimated" || s == "unknown") return ParamMode::kEstimated;
  throw std::invalid_argument("unknown parameter mode '" + s + "'");
}

bool scheme_uses_parameters(Scheme s) {
  return s == Scheme::kMl || s == Scheme::kMlRestricted || s == Scheme::kCanonical || s == Scheme::kMlFeatures;
}

void ExperimentConfig::validate() const {
  if (model.has_value() == dataset.has_value())
    throw std::invalid_argument("exactly one of an SBM model or a dataset is required");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (schemes.empty()) throw std::invalid_argument("no schemes requested");
  if (param_modes.empty()) throw std::invalid_argument("no parameter modes requested");
  const Index k = model ? model->num_blocks() : dataset->labels.num_blocks();
  const Index n = model ? model->num_vertices() : dataset->graph.size();
  if (dataset && dataset->labels.size() != n) throw std::invalid_argument("dataset labels do not cover the graph");
  if (seeds.policy == SeedPolicy::kStratified) {
    if (static_cast<Index>(seeds.per_block.size()) != k) throw std::invalid_argument("need one seed count per block");
  } else if (seeds.total < 0 || seeds.total > n) {
    throw std::invalid_argument("seed count out of range");
  }
  if (seeds.policy == SeedPolicy::kBlockRestricted && (seeds.restricted_block < 0 || seeds.restricted_block >= k))
    throw std::invalid_argument("restricted seed block out of range");
  const bool have_features = feature_generator.has_value() || (dataset && dataset->features.has_value());
  for (Scheme s : schemes) {
    if ((s == Scheme::kMlFeatures || s == Scheme::kFeaturesOnly) && !have_features)
      throw std::invalid_argument(std::string("scheme ") + scheme_name(s) + " needs vertex features");
    if ((s == Scheme::kSpectral || s == Scheme::kSpectralProjected) && k < 2)
      throw std::invalid_argument("spectral schemes need at least two blocks");
  }
  if (feature_generator) {
    if (feature_generator->means.rows() != k || feature_generator->means.cols() < 1)
      throw std::invalid_argument("feature generator needs a K x d mean matrix");
    if (!(feature_generator->sd > 0.0)) throw std::invalid_argument("feature sd must be positive");
  }
  if (dataset && dataset->features && dataset->features->x.rows() != n)
    throw std::invalid_argument("dataset features need one row per vertex");
  if (feature_weight && *feature_weight < 0.0) throw std::invalid_argument("feature weight must be non-negative");
  if (!(canonical_limit > 0.0)) throw std::invalid_argument("canonical limit must be positive");
  if (matcher.restarts < 1 || matcher.max_iters < 0) throw std::invalid_argument("invalid matcher options");
}

const SchemeSummary* ExperimentReport::find(Scheme s, std::optional<ParamMode> mode) const {
  for (const auto& x : schemes)
    if (x.scheme == s && (!mode || x.mode == mode)) return &x;
  return nullptr;
}

bool ExperimentReport::all_completed() const {
  return std::all_of(schemes.begin(), schemes.end(), [](const SchemeSummary& s) { return s.failed == 0; });
}

unsigned default_thread_count() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VN_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

ExperimentConfig small_simulation_config() {
  ExperimentConfig c;
  c.model = BlockModel({4, 3, 3}, simulation_lambda(1.0));
  c.seeds.policy = SeedPolicy::kUniformAll;
  c.seeds.total = 4;
  c.schemes = {Scheme::kMl, Scheme::kMlRestricted, Scheme::kSpectralProjected, Scheme::kCanonical};
  c.param_modes = {ParamMode::kKnown, ParamMode::kEstimated};
  c.trials = 200;
  return c;
}

ExperimentConfig medium_simulation_config() {
  ExperimentConfig c;
  c.model = BlockModel({200, 150, 150}, simulation_lambda(0.3));
  c.seeds.policy = SeedPolicy::kUniformAll;
  c.seeds.total = 20;
  c.schemes = {Scheme::kMl, Scheme::kMlRestricted, Scheme::kSpectralProjected};
  c.param_modes = {ParamMode::kKnown};
  c.trials = 200;
  return c;
}

namespace {

struct Slot {
  Scheme scheme;
  std::optional<ParamMode> mode;
};

struct SlotOutcome {
  bool ok = false;
  std::string error;
  double ap = 0.0;
  std::optional<double> ari;
  std::vector<bool> indicators;
};

struct TrialOutcome {
  std::string error;  // trial-wide failure (e.g. no admissible seed draw)
  double chance = 0.0;
  std::vector<SlotOutcome> slots;
};

constexpr int kMaxSeedDraws = 1000;

bool has_ari(Scheme s) { return s != Scheme::kCanonical; }

class Runner {
 public:
  explicit Runner(const ExperimentConfig& config) : config_(config) {
    for (Scheme s : config.schemes) {
      if (scheme_uses_parameters(s)) {
        for (ParamMode p : config.param_modes) slots_.push_back({s, p});
      } else {
        slots_.push_back({s, std::nullopt});
      }
    }
    if (config.model) {
      truth_.emplace(BlockAssignment::contiguous(config.model->block_sizes()));
      sizes_ = config.model->block_sizes();
    } else {
      truth_.emplace(config.dataset->labels);
      sizes_ = truth_->block_sizes();
    }
    k_ = truth_->num_blocks();
    // Known parameters for a dataset: fitted on the whole graph with its true labels.
    if (config.model) {
      known_ = known_parameters(config.model->lambda(), sizes_);
    } else {
      std::vector<Index> all(static_cast<std::size_t>(truth_->size()));
      for (Index v = 0; v < truth_->size(); ++v) all[static_cast<std::size_t>(v)] = v;
      const SeedSet everyone = SeedSet::from_assignment(std::move(all), *truth_);
      const EstimatedModel est = estimate_model(config.dataset->graph, everyone, truth_->size(), config.smoothing);
      known_ = {EdgeModel::bernoulli(est.lambda_hat), sizes_};
    }
  }

  const std::vector<Slot>& slots() const { return slots_; }

  TrialOutcome run(Index trial) const {
    const std::uint64_t master = config_.master_seed;
    const auto t = static_cast<std::uint64_t>(trial);
    TrialOutcome out;
    out.slots.resize(slots_.size());

    Rng graph_rng = derive_stream(master, t, 0);
    const Graph graph = config_.model ? sample_sbm(*config_.model, *truth_, graph_rng) : config_.dataset->graph;

    std::optional<FeatureSet> features;
    if (config_.feature_generator) {
      Rng feature_rng = derive_stream(master, t, 1);
      const FeatureGenerator& g = *config_.feature_generator;
      std::normal_distribution<double> noise(0.0, g.sd);
      FeatureSet f{Matrix(truth_->size(), g.means.cols())};
      for (Index v = 0; v < truth_->size(); ++v)
        for (Index d = 0; d < g.means.cols(); ++d) f.x(v, d) = g.means((*truth_)[v], d) + noise(feature_rng);
      features = std::move(f);
    } else if (config_.dataset && config_.dataset->features) {
      features = config_.dataset->features;
    }

    Rng seed_rng = derive_stream(master, t, 2);
    std::optional<SeedSet> seeds;
    for (int attempt = 0; attempt < kMaxSeedDraws && !seeds; ++attempt) {
      SeedSet s = select_seeds(*truth_, config_.seeds, seed_rng);
      if (admissible(s)) seeds = std::move(s);
    }
    if (!seeds) {
      out.error = "no admissible seed set after " + std::to_string(kMaxSeedDraws) + " draws";
      return out;
    }

    const TruthLabels truth = TruthLabels::from_assignment(*truth_, *seeds);
    out.chance = static_cast<double>(truth.nonseed_interesting) / static_cast<double>(seeds->num_nonseeds());
    std::vector<int> true_nonseed;
    for (Index v : seeds->nonseeds()) true_nonseed.push_back((*truth_)[v]);

    std::optional<NominationParameters> estimated;
    for (std::size_t si = 0; si < slots_.size(); ++si) {
      SlotOutcome& o = out.slots[si];
      Rng rng = derive_stream(master, t, 100 + si);
      try {
        const Slot& slot = slots_[si];
        const NominationParameters* params = &known_;
        if (slot.mode == ParamMode::kEstimated) {
          if (!estimated)
            estimated = estimated_parameters(graph, *seeds, config_.smoothing, config_.estimate_sizes, sizes_);
          params = &*estimated;
        }
        const NominationList list = nominate(slot.scheme, graph, *params, *seeds, features, rng);
        o.ap = average_precision(list, truth);
        o.indicators = rank_indicators(list, truth);
        if (has_ari(slot.scheme)) {
          std::vector<int> pred(true_nonseed.size());
          for (std::size_t r = 0; r < list.order.size(); ++r)
            pred[static_cast<std::size_t>(seeds->nonseed_position(list.order[r]))] = list.labels[r];
          o.ari = adjusted_rand_index(pred, true_nonseed);
        }
        o.ok = true;
      } catch (const std::exception& e) {
        o.error = e.what();
      }
    }
    return out;
  }

 private:
  bool admissible(const SeedSet& s) const {
    Index u1 = 0;
    for (Index v : s.nonseeds())
      if ((*truth_)[v] == 0) ++u1;
    if (u1 == 0) return false;
    if (config_.require_seed_in_every_block)
      for (Index c : s.per_block())
        if (c == 0) return false;
    return true;
  }

  NominationList nominate(Scheme scheme, const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                          const std::optional<FeatureSet>& features, Rng& rng) const {
    switch (scheme) {
      case Scheme::kMl: return nominate_ml(graph, params, seeds, config_.matcher, rng);
      case Scheme::kMlRestricted: return nominate_ml_restricted(graph, params, seeds, rng);
      case Scheme::kSpectral:
      case Scheme::kSpectralProjected: {
        SpectralOptions opts = config_.spectral;
        opts.project = scheme == Scheme::kSpectralProjected;
        return nominate_spectral(graph, seeds, static_cast<int>(k_), opts, rng);
      }
      case Scheme::kCanonical: return nominate_canonical(graph, params, seeds, rng, config_.canonical_limit);
      case Scheme::kMlFeatures:
        return nominate_features(graph, params, seeds, *features, config_.feature_weight, config_.feature_variant,
                                 config_.matcher, rng);
      case Scheme::kFeaturesOnly: {
        // Zero natural parameters leave only the feature term.
        NominationParameters flat{EdgeModel{Matrix::Zero(k_, k_), Matrix::Zero(k_, k_)}, sizes_};
        return nominate_features(graph, flat, seeds, *features, config_.feature_weight, config_.feature_variant,
                                 config_.matcher, rng);
      }
    }
    throw std::logic_error("unhandled scheme");
  }

  const ExperimentConfig& config_;
  std::vector<Slot> slots_;
  std::optional<BlockAssignment> truth_;
  std::vector<Index> sizes_;
  Index k_ = 0;
  NominationParameters known_;
};

void mean_and_se(const std::vector<double>& xs, double& mean, double& se) {
  mean = se = 0.0;
  if (xs.empty()) return;
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Runner runner(config);
  const Index trials = config.trials;

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  unsigned threads = config.threads == 0 ? default_thread_count() : std::min(config.threads, default_thread_count());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  std::atomic<Index> next{0};
  auto work = [&] {
    for (Index t = next++; t < trials; t = next++) outcomes[static_cast<std::size_t>(t)] = runner.run(t);
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  }

  ExperimentReport report;
  report.trials = trials;
  const auto& slots = runner.slots();
  std::vector<double> chances;
  for (const auto& o : outcomes)
    if (o.error.empty()) chances.push_back(o.chance);
  double ignored = 0.0;
  mean_and_se(chances, report.mean_chance, ignored);

  for (std::size_t si = 0; si < slots.size(); ++si) {
    SchemeSummary s;
    s.scheme = slots[si].scheme;
    s.mode = slots[si].mode;
    s.has_ari = has_ari(s.scheme);
    std::vector<double> aps, aris;
    std::vector<std::vector<bool>> rows;
    auto note = [&s](const std::string& msg) {
      if (std::find(s.errors.begin(), s.errors.end(), msg) == s.errors.end()) s.errors.push_back(msg);
    };
    for (const auto& o : outcomes) {
      if (!o.error.empty()) {
        ++s.failed;
        note(o.error);
        continue;
      }
      const SlotOutcome& r = o.slots[si];
      if (!r.ok) {
        ++s.failed;
        note(r.error);
        continue;
      }
      ++s.completed;
      aps.push_back(r.ap);
      if (r.ari) aris.push_back(*r.ari);
      rows.push_back(r.indicators);
      if (report.nonseeds == 0) report.nonseeds = static_cast<Index>(r.indicators.size());
    }
    mean_and_se(aps, s.mean_ap, s.se_ap);
    mean_and_se(aris, s.mean_ari, s.se_ari);
    if (!rows.empty()) s.curve = mean_nomination_curve(rows);
    report.schemes.push_back(std::move(s));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace vnom
