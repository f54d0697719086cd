#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnom/experiment.hpp"

namespace vnom::cli {

struct DatasetPaths {
  std::string edges;
  std::string labels;
  std::optional<std::string> features;
  bool weighted = false;
  std::optional<std::string> interest_block;
};

// An experiment as described by a JSON document. Either an SBM (explicit or a
// preset) or a dataset on disk; seeds.sweep lists seed totals for nominate.
struct RunConfig {
  ExperimentConfig experiment;
  std::optional<DatasetPaths> dataset;
  std::vector<Index> seed_sweep;
  std::string output_dir = ".";
};

// Throws std::invalid_argument with the offending key in the message.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

// Loads the dataset files into experiment.dataset. Warnings go to warn.
void load_dataset(RunConfig& config, std::ostream& warn);

nlohmann::json config_echo(const RunConfig& config);

}  // namespace vnom::cli
