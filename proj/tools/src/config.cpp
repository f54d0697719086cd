#include "vnom_cli/config.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "vnom_cli/io.hpp"

namespace vnom::cli {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw std::invalid_argument("unknown key '" + where + "." + k + "'");
}

template <typename T>
T get(const json& obj, const std::string& where, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("bad value for '" + where + "." + key + "': " + e.what());
  }
}

Matrix matrix_from(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty() || !rows.front().is_array())
    throw std::invalid_argument(where + " must be a non-empty array of rows");
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) throw std::invalid_argument(where + " rows differ in length");
    for (Index j = 0; j < c; ++j) {
      if (!row[static_cast<std::size_t>(j)].is_number()) throw std::invalid_argument(where + " entries must be numbers");
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

FwInit parse_init(const std::string& s) {
  if (s == "barycenter") return FwInit::kBarycenter;
  if (s == "identity") return FwInit::kIdentity;
  if (s == "random") return FwInit::kRandom;
  throw std::invalid_argument("unknown matcher init '" + s + "'");
}

const char* init_name(FwInit i) {
  switch (i) {
    case FwInit::kBarycenter: return "barycenter";
    case FwInit::kIdentity: return "identity";
    case FwInit::kRandom: return "random";
  }
  return "?";
}

FeatureVariant parse_variant(const std::string& s) {
  if (s == "log_density") return FeatureVariant::kLogDensity;
  if (s == "density") return FeatureVariant::kDensity;
  if (s == "mean") return FeatureVariant::kMean;
  throw std::invalid_argument("unknown feature variant '" + s + "'");
}

const char* variant_name(FeatureVariant v) {
  switch (v) {
    case FeatureVariant::kLogDensity: return "log_density";
    case FeatureVariant::kDensity: return "density";
    case FeatureVariant::kMean: return "mean";
  }
  return "?";
}

SeedPolicy parse_policy(const std::string& s) {
  if (s == "uniform") return SeedPolicy::kUniformAll;
  if (s == "block") return SeedPolicy::kBlockRestricted;
  if (s == "stratified") return SeedPolicy::kStratified;
  throw std::invalid_argument("unknown seed policy '" + s + "'");
}

const char* policy_name(SeedPolicy p) {
  switch (p) {
    case SeedPolicy::kUniformAll: return "uniform";
    case SeedPolicy::kBlockRestricted: return "block";
    case SeedPolicy::kStratified: return "stratified";
  }
  return "?";
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  allow_keys(doc, "config",
             {"preset", "model", "dataset", "schemes", "param_modes", "seeds", "trials", "master_seed", "matcher",
              "spectral", "smoothing", "estimate_sizes", "features", "canonical_limit", "threads", "output_dir"});
  RunConfig rc;
  ExperimentConfig& c = rc.experiment;
  if (doc.contains("preset")) {
    const auto p = get<std::string>(doc, "config", "preset");
    if (p == "small") {
      c = small_simulation_config();
    } else if (p == "medium") {
      c = medium_simulation_config();
    } else {
      throw std::invalid_argument("unknown preset '" + p + "'");
    }
  }
  if (doc.contains("model")) {
    const json& m = doc["model"];
    allow_keys(m, "model", {"block_sizes", "lambda", "t"});
    const auto sizes = get<std::vector<Index>>(m, "model", "block_sizes");
    if (m.contains("lambda") == m.contains("t")) throw std::invalid_argument("model needs exactly one of lambda or t");
    const Matrix lambda = m.contains("lambda") ? matrix_from(m["lambda"], "model.lambda")
                                               : simulation_lambda(get<double>(m, "model", "t"));
    c.model = BlockModel(sizes, lambda);
  }
  if (doc.contains("dataset")) {
    if (doc.contains("model")) throw std::invalid_argument("config has both a model and a dataset");
    const json& d = doc["dataset"];
    allow_keys(d, "dataset", {"edges", "labels", "features", "weighted", "interest_block"});
    DatasetPaths p;
    p.edges = get<std::string>(d, "dataset", "edges");
    p.labels = get<std::string>(d, "dataset", "labels");
    if (d.contains("features")) p.features = get<std::string>(d, "dataset", "features");
    if (d.contains("weighted")) p.weighted = get<bool>(d, "dataset", "weighted");
    if (d.contains("interest_block")) p.interest_block = get<std::string>(d, "dataset", "interest_block");
    rc.dataset = p;
    c.model.reset();
  }
  if (doc.contains("schemes")) {
    c.schemes.clear();
    for (const auto& s : get<std::vector<std::string>>(doc, "config", "schemes")) c.schemes.push_back(parse_scheme(s));
  }
  if (doc.contains("param_modes")) {
    c.param_modes.clear();
    for (const auto& s : get<std::vector<std::string>>(doc, "config", "param_modes"))
      c.param_modes.push_back(parse_param_mode(s));
  }
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    allow_keys(s, "seeds", {"policy", "total", "per_block", "block", "sweep", "require_every_block"});
    if (s.contains("policy")) c.seeds.policy = parse_policy(get<std::string>(s, "seeds", "policy"));
    if (s.contains("total")) c.seeds.total = get<Index>(s, "seeds", "total");
    if (s.contains("per_block")) c.seeds.per_block = get<std::vector<Index>>(s, "seeds", "per_block");
    if (s.contains("block")) c.seeds.restricted_block = get<int>(s, "seeds", "block");
    if (s.contains("sweep")) rc.seed_sweep = get<std::vector<Index>>(s, "seeds", "sweep");
    if (s.contains("require_every_block")) c.require_seed_in_every_block = get<bool>(s, "seeds", "require_every_block");
  }
  if (doc.contains("trials")) c.trials = get<Index>(doc, "config", "trials");
  if (doc.contains("master_seed")) c.master_seed = get<std::uint64_t>(doc, "config", "master_seed");
  if (doc.contains("matcher")) {
    const json& m = doc["matcher"];
    allow_keys(m, "matcher", {"max_iters", "tol", "restarts", "init"});
    if (m.contains("max_iters")) c.matcher.max_iters = get<int>(m, "matcher", "max_iters");
    if (m.contains("tol")) c.matcher.tol = get<double>(m, "matcher", "tol");
    if (m.contains("restarts")) c.matcher.restarts = get<int>(m, "matcher", "restarts");
    if (m.contains("init")) c.matcher.init = parse_init(get<std::string>(m, "matcher", "init"));
  }
  if (doc.contains("spectral")) {
    const json& s = doc["spectral"];
    allow_keys(s, "spectral", {"kmeans_restarts", "kmeans_max_iters"});
    if (s.contains("kmeans_restarts")) c.spectral.kmeans.restarts = get<int>(s, "spectral", "kmeans_restarts");
    if (s.contains("kmeans_max_iters")) c.spectral.kmeans.max_iters = get<int>(s, "spectral", "kmeans_max_iters");
  }
  if (doc.contains("smoothing")) c.smoothing = get<bool>(doc, "config", "smoothing");
  if (doc.contains("estimate_sizes")) c.estimate_sizes = get<bool>(doc, "config", "estimate_sizes");
  if (doc.contains("features")) {
    const json& f = doc["features"];
    allow_keys(f, "features", {"generator", "weight", "variant"});
    if (f.contains("generator")) {
      const json& g = f["generator"];
      allow_keys(g, "features.generator", {"means", "sd"});
      FeatureGenerator gen;
      gen.means = matrix_from(g.at("means"), "features.generator.means");
      if (g.contains("sd")) gen.sd = get<double>(g, "features.generator", "sd");
      c.feature_generator = gen;
    }
    if (f.contains("weight")) c.feature_weight = get<double>(f, "features", "weight");
    if (f.contains("variant")) c.feature_variant = parse_variant(get<std::string>(f, "features", "variant"));
  }
  if (doc.contains("canonical_limit")) c.canonical_limit = get<double>(doc, "config", "canonical_limit");
  if (doc.contains("threads")) c.threads = get<unsigned>(doc, "config", "threads");
  if (doc.contains("output_dir")) rc.output_dir = get<std::string>(doc, "config", "output_dir");
  if (!c.model && !rc.dataset) throw std::invalid_argument("config needs a preset, a model or a dataset");
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return parse_run_config(doc);
}

void load_dataset(RunConfig& config, std::ostream& warn) {
  if (!config.dataset) return;
  const DatasetPaths& p = *config.dataset;
  const RawLabels raw = read_labels(p.labels);
  std::vector<long long> label_ids;
  for (const auto& [id, name] : raw.entries) label_ids.push_back(id);
  LoadedGraph g = load_edge_list(p.edges, p.weighted, warn, label_ids);
  LoadedLabels labels = assign_labels(raw, g.index, p.interest_block);
  Dataset d{p.edges, std::move(g.graph), std::move(labels.assignment), std::nullopt};
  if (p.features) d.features = load_features(*p.features, g.index);
  config.experiment.dataset = std::move(d);
  if (g.index.compacted()) {
    const std::string mapping = config.output_dir + "/vertex_mapping.txt";
    write_vertex_mapping(g.index, mapping);
    warn << "warning: vertex mapping written to " << mapping << "\n";
  }
}

json config_echo(const RunConfig& config) {
  const ExperimentConfig& c = config.experiment;
  json out;
  if (c.model) {
    out["model"] = {{"block_sizes", c.model->block_sizes()}, {"lambda", matrix_to(c.model->lambda())}};
  }
  if (config.dataset) {
    out["dataset"] = {{"edges", config.dataset->edges}, {"labels", config.dataset->labels},
                      {"weighted", config.dataset->weighted}};
    if (config.dataset->features) out["dataset"]["features"] = *config.dataset->features;
    if (config.dataset->interest_block) out["dataset"]["interest_block"] = *config.dataset->interest_block;
  }
  json schemes = json::array();
  for (Scheme s : c.schemes) schemes.push_back(scheme_name(s));
  out["schemes"] = schemes;
  json modes = json::array();
  for (ParamMode m : c.param_modes) modes.push_back(param_mode_name(m));
  out["param_modes"] = modes;
  out["seeds"] = {{"policy", policy_name(c.seeds.policy)},
                  {"total", c.seeds.total},
                  {"per_block", c.seeds.per_block},
                  {"block", c.seeds.restricted_block},
                  {"require_every_block", c.require_seed_in_every_block}};
  if (!config.seed_sweep.empty()) out["seeds"]["sweep"] = config.seed_sweep;
  out["trials"] = c.trials;
  out["master_seed"] = c.master_seed;
  out["matcher"] = {{"max_iters", c.matcher.max_iters},
                    {"tol", c.matcher.tol},
                    {"restarts", c.matcher.restarts},
                    {"init", init_name(c.matcher.init)}};
  out["spectral"] = {{"kmeans_restarts", c.spectral.kmeans.restarts},
                     {"kmeans_max_iters", c.spectral.kmeans.max_iters}};
  out["smoothing"] = c.smoothing;
  out["estimate_sizes"] = c.estimate_sizes;
  json features = {{"variant", variant_name(c.feature_variant)}};
  if (c.feature_weight) features["weight"] = *c.feature_weight;
  if (c.feature_generator)
    features["generator"] = {{"means", matrix_to(c.feature_generator->means)}, {"sd", c.feature_generator->sd}};
  out["features"] = features;
  out["canonical_limit"] = c.canonical_limit;
  out["threads"] = c.threads;
  return out;
}

}  // namespace vnom::cli
