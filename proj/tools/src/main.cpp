#include <iostream>

#include <CLI11.hpp>

#include "vnom_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace vnom::cli;
  CLI::App app{"vnom: vertex nomination on stochastic block models"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment on a simulated SBM");
  simulate->add_option("--config", sim.config_path, "JSON experiment config");
  simulate->add_option("--preset", sim.preset, "small or medium")->check(CLI::IsMember({"small", "medium"}));
  simulate->add_option("--trials", sim.trials, "Override the trial count");
  simulate->add_option("--seed", sim.master_seed, "Override the master seed");
  simulate->add_option("--out", sim.output_dir, "Output directory");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores, capped by VN_THREADS)");

  NominateArgs nom;
  auto* nominate = app.add_subcommand("nominate", "Seed-count sweep on a graph with known labels");
  nominate->add_option("--config", nom.config_path, "JSON experiment config with a dataset");
  nominate->add_option("--edges", nom.edges, "Edge list 'u v [w]'");
  nominate->add_option("--labels", nom.labels, "Labels 'vertex block'");
  nominate->add_option("--features", nom.features, "Features 'vertex x1 ... xd'");
  nominate->add_flag("--weighted", nom.weighted, "Read a weight column");
  nominate->add_option("--interest-block", nom.interest_block, "Block name to nominate (default: first listed)");
  nominate->add_option("--seeds", nom.seeds, "Seed counts to sweep")->delimiter(',');
  nominate->add_option("--schemes", nom.schemes, "Schemes (ml, ml_r, sp, sp_proj, can, ml_f, features)")->delimiter(',');
  nominate->add_option("--param-mode", nom.param_modes, "known and/or estimated")->delimiter(',');
  nominate->add_option("--trials", nom.trials, "Trials per seed count");
  nominate->add_option("--seed", nom.master_seed, "Master seed");
  nominate->add_option("--out", nom.output_dir, "Output directory");
  nominate->add_option("--threads", nom.threads, "Worker threads");

  DiagnosticsArgs diag;
  auto* diagnostics = app.add_subcommand("diagnostics", "Separation quantities of an edge-probability matrix");
  diagnostics->add_option("--lambda", diag.lambda_path, "Matrix file (JSON rows or whitespace rows)");
  diagnostics->add_option("--t", diag.t, "Use the 3-block simulation matrix at signal level t");
  diagnostics->add_flag("--json", diag.json, "Print JSON");

  SampleArgs samp;
  auto* sample = app.add_subcommand("sample", "Draw one SBM graph and write it as an edge list");
  sample->add_option("--config", samp.config_path, "JSON config with a model");
  sample->add_option("--preset", samp.preset, "small or medium")->check(CLI::IsMember({"small", "medium"}));
  sample->add_option("--seed", samp.seed, "Random seed");
  sample->add_option("--edges", samp.edges_out, "Edge list output");
  sample->add_option("--labels", samp.labels_out, "Label output");

  RankArgs rank;
  auto* ranker = app.add_subcommand("rank", "Rank the unlabelled vertices of one graph");
  ranker->add_option("--edges", rank.edges, "Edge list 'u v [w]'")->required();
  ranker->add_option("--seeds", rank.seeds, "Seed labels 'vertex block'")->required();
  ranker->add_flag("--weighted", rank.weighted, "Read a weight column");
  ranker->add_option("--interest-block", rank.interest_block, "Block name to nominate (default: first listed)");
  ranker->add_option("--scheme", rank.scheme, "ml, ml_r, sp or sp_proj");
  ranker->add_option("--seed", rank.seed, "Random seed for tie-breaking and restarts");
  ranker->add_option("--out", rank.output, "CSV output (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(sim, std::cout, std::cerr);
    if (*nominate) return cmd_nominate(nom, std::cout, std::cerr);
    if (*diagnostics) return cmd_diagnostics(diag, std::cout, std::cerr);
    if (*sample) return cmd_sample(samp, std::cout, std::cerr);
    if (*ranker) return cmd_rank(rank, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
