#include "vnom_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "vnom_cli/io.hpp"

namespace vnom::cli {

using nlohmann::json;

namespace {

std::string mode_label(const SchemeSummary& s) { return s.mode ? param_mode_name(*s.mode) : "-"; }

std::ofstream open_output(const std::string& dir, const std::string& name) {
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(10);
  return out;
}

void prepare_output(const std::string& dir) { std::filesystem::create_directories(dir); }

void apply_overrides(RunConfig& rc, const std::optional<Index>& trials, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& dir, const std::optional<unsigned>& threads) {
  if (trials) rc.experiment.trials = *trials;
  if (seed) rc.experiment.master_seed = *seed;
  if (dir) rc.output_dir = *dir;
  if (threads) rc.experiment.threads = *threads;
}

RunConfig config_from(const std::optional<std::string>& path, const std::optional<std::string>& preset) {
  if (path && preset) throw std::invalid_argument("give either --config or --preset, not both");
  if (path) return load_run_config(*path);
  return parse_run_config(json{{"preset", preset.value_or("small")}});
}

}  // namespace

json report_json(const ExperimentReport& report, const RunConfig& config) {
  json out;
  out["config"] = config_echo(config);
  out["trials"] = report.trials;
  out["nonseeds"] = report.nonseeds;
  out["mean_chance"] = report.mean_chance;
  out["wall_seconds"] = report.wall_seconds;
  json schemes = json::array();
  for (const auto& s : report.schemes) {
    json j = {{"scheme", scheme_name(s.scheme)},
              {"param_mode", mode_label(s)},
              {"completed", s.completed},
              {"failed", s.failed},
              {"errors", s.errors},
              {"mean_ap", s.mean_ap},
              {"se_ap", s.se_ap}};
    if (s.has_ari) {
      j["mean_ari"] = s.mean_ari;
      j["se_ari"] = s.se_ari;
    }
    j["curve"] = {{"prob", s.curve.prob}, {"stderr", s.curve.stderr_}};
    schemes.push_back(j);
  }
  out["schemes"] = schemes;
  return out;
}

void write_curve_csv(const ExperimentReport& report, std::ostream& out) {
  out << "scheme,param_mode,rank,prob,stderr\n";
  for (const auto& s : report.schemes)
    for (std::size_t r = 0; r < s.curve.prob.size(); ++r)
      out << scheme_name(s.scheme) << ',' << mode_label(s) << ',' << r + 1 << ',' << s.curve.prob[r] << ','
          << s.curve.stderr_[r] << '\n';
}

void write_table_csv(const ExperimentReport& report, std::ostream& out) {
  out << "scheme,param_mode,mean_ap,se_ap,mean_ari,se_ari,completed,failed\n";
  for (const auto& s : report.schemes) {
    out << scheme_name(s.scheme) << ',' << mode_label(s) << ',' << s.mean_ap << ',' << s.se_ap << ',';
    if (s.has_ari) out << s.mean_ari << ',' << s.se_ari;
    else out << ',';
    out << ',' << s.completed << ',' << s.failed << '\n';
  }
}

void write_sweep_header(std::ostream& out) {
  out << "seeds,scheme,param_mode,mean_ap,se_ap,mean_ari,se_ari,mean_chance,completed,failed\n";
}

void write_sweep_rows(Index seeds, const ExperimentReport& report, std::ostream& out) {
  for (const auto& s : report.schemes) {
    out << seeds << ',' << scheme_name(s.scheme) << ',' << mode_label(s) << ',' << s.mean_ap << ',' << s.se_ap << ',';
    if (s.has_ari) out << s.mean_ari << ',' << s.se_ari;
    else out << ',';
    out << ',' << report.mean_chance << ',' << s.completed << ',' << s.failed << '\n';
  }
}

int report_failures(const ExperimentReport& report, std::ostream& err) {
  int status = 0;
  for (const auto& s : report.schemes) {
    if (s.failed == 0) continue;
    status = 1;
    err << "error: " << scheme_name(s.scheme) << " (" << mode_label(s) << ") failed in " << s.failed << " of "
        << report.trials << " trials";
    for (const auto& e : s.errors) err << "\n  " << e;
    err << '\n';
  }
  return status;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig rc = config_from(args.config_path, args.preset);
  apply_overrides(rc, args.trials, args.master_seed, args.output_dir, args.threads);
  if (rc.dataset) throw std::invalid_argument("simulate needs an SBM model; use nominate for datasets");
  rc.experiment.validate();
  prepare_output(rc.output_dir);
  const ExperimentReport report = run_experiment(rc.experiment);
  open_output(rc.output_dir, "report.json") << report_json(report, rc).dump(2) << '\n';
  auto curve = open_output(rc.output_dir, "curve.csv");
  write_curve_csv(report, curve);
  auto table = open_output(rc.output_dir, "table.csv");
  write_table_csv(report, table);
  write_table_csv(report, out);
  out << "chance " << report.mean_chance << ", " << report.trials << " trials in " << std::fixed
      << std::setprecision(1) << report.wall_seconds << " s\n";
  return report_failures(report, err);
}

int cmd_nominate(const NominateArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  if (args.config_path) {
    rc = load_run_config(*args.config_path);
  } else {
    if (!args.edges || !args.labels) throw std::invalid_argument("nominate needs --config or --edges and --labels");
    json doc = {{"dataset", {{"edges", *args.edges}, {"labels", *args.labels}, {"weighted", args.weighted}}},
                {"schemes", {"ml", "ml_r", "sp_proj"}},
                {"param_modes", {"estimated"}}};
    if (args.features) doc["dataset"]["features"] = *args.features;
    if (args.interest_block) doc["dataset"]["interest_block"] = *args.interest_block;
    rc = parse_run_config(doc);
  }
  if (!args.seeds.empty()) rc.seed_sweep = args.seeds;
  if (!args.schemes.empty()) {
    rc.experiment.schemes.clear();
    for (const auto& s : args.schemes) rc.experiment.schemes.push_back(parse_scheme(s));
  }
  if (!args.param_modes.empty()) {
    rc.experiment.param_modes.clear();
    for (const auto& s : args.param_modes) rc.experiment.param_modes.push_back(parse_param_mode(s));
  }
  apply_overrides(rc, args.trials, args.master_seed, args.output_dir, args.threads);
  if (!rc.dataset) throw std::invalid_argument("nominate needs a dataset");
  if (rc.seed_sweep.empty()) {
    if (rc.experiment.seeds.total < 1) throw std::invalid_argument("nominate needs seed counts (--seeds)");
    rc.seed_sweep = {rc.experiment.seeds.total};
  }
  prepare_output(rc.output_dir);
  load_dataset(rc, err);

  auto sweep = open_output(rc.output_dir, "sweep.csv");
  write_sweep_header(sweep);
  write_sweep_header(out);
  json reports = json::array();
  int status = 0;
  for (Index m : rc.seed_sweep) {
    rc.experiment.seeds.total = m;
    const ExperimentReport report = run_experiment(rc.experiment);
    write_sweep_rows(m, report, sweep);
    write_sweep_rows(m, report, out);
    json j = report_json(report, rc);
    j["seeds"] = m;
    reports.push_back(j);
    status = std::max(status, report_failures(report, err));
  }
  open_output(rc.output_dir, "report.json") << reports.dump(2) << '\n';
  return status;
}

Matrix read_lambda(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<std::vector<double>> rows;
  if (first != std::string::npos && text[first] == '[') {
    rows = json::parse(text).get<std::vector<std::vector<double>>>();
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      line = line.substr(0, line.find('#'));
      std::istringstream ls(line);
      std::vector<double> row;
      for (double x; ls >> x;) row.push_back(x);
      if (!ls.eof()) throw std::invalid_argument(path + ": malformed row '" + line + "'");
      if (!row.empty()) rows.push_back(row);
    }
  }
  if (rows.empty()) throw std::invalid_argument(path + ": empty matrix");
  const auto k = static_cast<Index>(rows.size());
  Matrix m(k, k);
  for (Index i = 0; i < k; ++i) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != k)
      throw std::invalid_argument(path + ": lambda must be square");
    for (Index j = 0; j < k; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

int cmd_diagnostics(const DiagnosticsArgs& args, std::ostream& out, std::ostream&) {
  if (args.lambda_path.has_value() == args.t.has_value())
    throw std::invalid_argument("diagnostics needs exactly one of --lambda or --t");
  const Matrix lambda = args.lambda_path ? read_lambda(*args.lambda_path) : simulation_lambda(*args.t);
  BlockModel check(std::vector<Index>(static_cast<std::size_t>(lambda.rows()), 1), lambda);
  for (Index i = 0; i < lambda.rows(); ++i)
    for (Index j = 0; j < lambda.cols(); ++j)
      if (lambda(i, j) <= 0.0 || lambda(i, j) >= 1.0)
        throw std::invalid_argument("lambda entries must lie strictly between 0 and 1");
  const SeparationDiagnostics d = separation_diagnostics(lambda);
  const double ratio = d.ratio();
  if (args.json) {
    json j = {{"alpha", d.alpha}, {"beta", d.beta},   {"c", d.c},
              {"gamma", d.gamma}, {"kappa", d.kappa}, {"diagonal_distinct", d.diagonal_distinct}};
    j["ratio"] = std::isfinite(ratio) ? json(ratio) : json("inf");
    out << j.dump(2) << '\n';
    return 0;
  }
  out << std::setprecision(8);
  out << "alpha " << d.alpha << "\nbeta " << d.beta << "\nc " << d.c << "\ngamma " << d.gamma << "\nkappa "
      << d.kappa << "\nratio c^2/(alpha beta kappa gamma) " << ratio << '\n';
  out << "diagonal differs from every off-diagonal entry in its row: " << (d.diagonal_distinct ? "yes" : "no")
      << '\n';
  return 0;
}

int cmd_sample(const SampleArgs& args, std::ostream& out, std::ostream&) {
  RunConfig rc = config_from(args.config_path, args.preset);
  if (!rc.experiment.model) throw std::invalid_argument("sample needs an SBM model");
  const BlockModel& model = *rc.experiment.model;
  const BlockAssignment truth = BlockAssignment::contiguous(model.block_sizes());
  Rng rng = derive_stream(args.seed, 0, 0);
  const Graph g = sample_sbm(model, truth, rng);
  write_edge_list(g, args.edges_out);
  write_labels(truth, args.labels_out);
  out << "wrote " << g.size() << " vertices and " << g.edge_count() << " edges to " << args.edges_out << '\n';
  return 0;
}

int cmd_rank(const RankArgs& args, std::ostream& out, std::ostream& err) {
  const RawLabels raw = read_labels(args.seeds);
  std::vector<long long> ids;
  for (const auto& [id, name] : raw.entries) ids.push_back(id);
  LoadedGraph g = load_edge_list(args.edges, args.weighted, err, ids);

  std::vector<std::string> names;
  for (const auto& [id, name] : raw.entries)
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  if (args.interest_block) {
    const auto it = std::find(names.begin(), names.end(), *args.interest_block);
    if (it == names.end()) throw std::invalid_argument("no seed in block '" + *args.interest_block + "'");
    std::rotate(names.begin(), it, it + 1);
  }
  std::vector<Index> seed_vertices;
  std::vector<int> seed_labels;
  for (const auto& [id, name] : raw.entries) {
    seed_vertices.push_back(*g.index.find(id));
    seed_labels.push_back(static_cast<int>(std::find(names.begin(), names.end(), name) - names.begin()));
  }
  const auto k = static_cast<int>(names.size());
  const SeedSet seeds(seed_vertices, seed_labels, k, g.graph.size());

  Rng rng = derive_stream(args.seed, 0, 0);
  const Scheme scheme = parse_scheme(args.scheme);
  NominationList list;
  switch (scheme) {
    case Scheme::kMl:
    case Scheme::kMlRestricted: {
      const NominationParameters params = estimated_parameters(g.graph, seeds, true, true);
      list = scheme == Scheme::kMl ? nominate_ml(g.graph, params, seeds, FwOptions{}, rng)
                                   : nominate_ml_restricted(g.graph, params, seeds, rng);
      break;
    }
    case Scheme::kSpectral:
    case Scheme::kSpectralProjected: {
      SpectralOptions opts;
      opts.project = scheme == Scheme::kSpectralProjected;
      list = nominate_spectral(g.graph, seeds, k, opts, rng);
      break;
    }
    default:
      throw std::invalid_argument("rank supports ml, ml_r, sp and sp_proj");
  }

  std::ofstream file;
  if (args.output) {
    file.open(*args.output);
    if (!file) throw std::runtime_error("cannot write '" + *args.output + "'");
  }
  std::ostream& dst = args.output ? file : out;
  dst << std::setprecision(10) << "rank,vertex,score,label\n";
  const bool block_labels = scheme == Scheme::kMl || scheme == Scheme::kMlRestricted;
  for (Index r = 0; r < list.size(); ++r) {
    const auto ri = static_cast<std::size_t>(r);
    dst << r + 1 << ',' << g.index.id_of(list.order[ri]) << ',' << list.scores[ri] << ',';
    if (block_labels) dst << names[static_cast<std::size_t>(list.labels[ri])];
    else dst << list.labels[ri];
    dst << '\n';
  }
  if (list.degenerate) err << "warning: scores are degenerate; the order is random\n";
  return 0;
}

}  // namespace vnom::cli
