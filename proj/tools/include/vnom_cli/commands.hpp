#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnom/experiment.hpp"
#include "vnom_cli/config.hpp"

namespace vnom::cli {

// Report files. CSV headers:
//   curve.csv  scheme,param_mode,rank,prob,stderr
//   table.csv  scheme,param_mode,mean_ap,se_ap,mean_ari,se_ari,completed,failed
//   sweep.csv  seeds,scheme,param_mode,mean_ap,se_ap,mean_ari,se_ari,mean_chance,completed,failed
// param_mode is "-" for schemes that take no model parameters, and ARI
// columns are empty where ARI is not defined. Ranks are 1-based.
nlohmann::json report_json(const ExperimentReport& report, const RunConfig& config);
void write_curve_csv(const ExperimentReport& report, std::ostream& out);
void write_table_csv(const ExperimentReport& report, std::ostream& out);
void write_sweep_header(std::ostream& out);
void write_sweep_rows(Index seeds, const ExperimentReport& report, std::ostream& out);

// Lists failed schemes on err; returns 0 when every scheme completed.
int report_failures(const ExperimentReport& report, std::ostream& err);

struct SimulateArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::optional<Index> trials;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> output_dir;
  std::optional<unsigned> threads;
};
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct NominateArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> edges;
  std::optional<std::string> labels;
  std::optional<std::string> features;
  bool weighted = false;
  std::optional<std::string> interest_block;
  std::vector<Index> seeds;
  std::vector<std::string> schemes;
  std::vector<std::string> param_modes;
  std::optional<Index> trials;
  std::optional<std::uint64_t> master_seed;
  std::optional<std::string> output_dir;
  std::optional<unsigned> threads;
};
// Seed sweep on a dataset; writes sweep.csv and report.json.
int cmd_nominate(const NominateArgs& args, std::ostream& out, std::ostream& err);

struct DiagnosticsArgs {
  std::optional<std::string> lambda_path;  // JSON matrix or whitespace rows
  std::optional<double> t;
  bool json = false;
};
int cmd_diagnostics(const DiagnosticsArgs& args, std::ostream& out, std::ostream& err);

struct SampleArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;
  std::uint64_t seed = 1;
  std::string edges_out = "edges.txt";
  std::string labels_out = "labels.txt";
};
// Draws one graph from the configured SBM and writes it with its labels.
int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream& err);

struct RankArgs {
  std::string edges;
  std::string seeds;  // "vertex block" for the seed vertices
  bool weighted = false;
  std::optional<std::string> interest_block;
  std::string scheme = "ml";
  std::uint64_t seed = 1;
  std::optional<std::string> output;
};
// Ranks the unlabelled vertices of one graph with parameters estimated from
// the seeds; writes rank,vertex,score,label CSV.
int cmd_rank(const RankArgs& args, std::ostream& out, std::ostream& err);

Matrix read_lambda(const std::string& path);

}  // namespace vnom::cli
