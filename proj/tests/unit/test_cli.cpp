#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "vnom_cli/commands.hpp"
#include "vnom_cli/config.hpp"
#include "vnom_cli/io.hpp"

namespace vnom::cli {
namespace {

namespace fs = std::filesystem;

std::string fixture(const std::string& name) { return std::string(VNOM_FIXTURE_DIR) + "/" + name; }

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vnom_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int count_lines(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  int n = 0;
  for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
  return n;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Matrix path_adjacency() {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = 1.0;
  return a;
}

TEST(EdgeList, ZeroAndOneBasedPaths) {
  std::ostringstream warn;
  const LoadedGraph zero = load_edge_list(fixture("path_zero_based.txt"), false, warn);
  const LoadedGraph one = load_edge_list(fixture("path_one_based.txt"), false, warn);
  EXPECT_EQ(zero.graph.adjacency(), path_adjacency());
  EXPECT_EQ(one.graph.adjacency(), path_adjacency());
  EXPECT_FALSE(zero.index.one_based());
  EXPECT_TRUE(one.index.one_based());
  EXPECT_EQ(one.index.id_of(0), 1);
  EXPECT_TRUE(warn.str().empty());
}

TEST(EdgeList, DuplicateAndSelfLoopWarnOnce) {
  std::ostringstream warn;
  const LoadedGraph g = load_edge_list(fixture("dup_selfloop.txt"), false, warn);
  EXPECT_EQ(count_lines(warn.str(), "self-loop"), 1);
  EXPECT_EQ(count_lines(warn.str(), "duplicate"), 1);
  EXPECT_EQ(g.stats.self_loops, 1);
  EXPECT_EQ(g.stats.duplicates, 1);
  EXPECT_EQ(g.graph.size(), 4);
  EXPECT_EQ(g.graph.edge_count(), 3);
  EXPECT_EQ(g.graph(1, 1), 0.0);
}

TEST(EdgeList, ParseErrorsCarryLineNumbers) {
  const fs::path dir = scratch_dir("parse");
  std::ofstream(dir / "bad.txt") << "0 1\n1 x\n";
  std::ofstream(dir / "weighted.txt") << "0 1 2.5\n";
  try {
    read_edge_list((dir / "bad.txt").string(), false);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(read_edge_list((dir / "weighted.txt").string(), false), ParseError);
  const RawEdgeList w = read_edge_list((dir / "weighted.txt").string(), true);
  EXPECT_EQ(std::get<2>(w.edges.front()), 2.5);
}

TEST(EdgeList, GapsAreCompacted) {
  const fs::path dir = scratch_dir("gaps");
  std::ofstream(dir / "gaps.txt") << "10 20\n20 40\n";
  std::ostringstream warn;
  const LoadedGraph g = load_edge_list((dir / "gaps.txt").string(), false, warn);
  EXPECT_TRUE(g.index.compacted());
  EXPECT_EQ(g.graph.adjacency(), path_adjacency());
  EXPECT_EQ(g.index.id_of(2), 40);
  EXPECT_EQ(count_lines(warn.str(), "compacting"), 1);
}

TEST(EdgeList, RoundTrip) {
  Rng rng(1);
  const std::vector<Index> sizes{6, 5, 4};
  const Graph g = sample_sbm(BlockModel(sizes, simulation_lambda(1.0)), BlockAssignment::contiguous(sizes), rng);
  const fs::path dir = scratch_dir("roundtrip");
  write_edge_list(g, (dir / "g.txt").string());
  std::ostringstream warn;
  std::vector<long long> all(15);
  for (long long v = 0; v < 15; ++v) all[static_cast<std::size_t>(v)] = v;
  const LoadedGraph back = load_edge_list((dir / "g.txt").string(), false, warn, all);
  EXPECT_EQ(back.graph.adjacency(), g.adjacency());
}

TEST(Labels, ContiguousAndRelabelled) {
  std::ostringstream warn;
  const LoadedGraph zero = load_edge_list(fixture("path_zero_based.txt"), false, warn);
  const LoadedLabels l = assign_labels(read_labels(fixture("path_labels.txt")), zero.index);
  EXPECT_EQ(l.assignment.labels(), (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(l.block_names, (std::vector<std::string>{"a", "b"}));

  const LoadedGraph one = load_edge_list(fixture("path_one_based.txt"), false, warn);
  const LoadedLabels nc = assign_labels(read_labels(fixture("path_labels_noncontiguous.txt")), one.index);
  EXPECT_EQ(nc.assignment.labels(), (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(nc.block_names, (std::vector<std::string>{"b", "a"}));

  const LoadedLabels moved =
      assign_labels(read_labels(fixture("path_labels_noncontiguous.txt")), one.index, std::string("a"));
  EXPECT_EQ(moved.assignment.labels(), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(moved.block_names.front(), "a");
  EXPECT_THROW(assign_labels(read_labels(fixture("path_labels.txt")), zero.index, std::string("zzz")),
               std::invalid_argument);
}

TEST(Labels, MissingAndUnknownVertices) {
  std::ostringstream warn;
  const LoadedGraph g = load_edge_list(fixture("path_zero_based.txt"), false, warn);
  EXPECT_ANY_THROW(assign_labels(read_labels(fixture("path_labels_missing.txt")), g.index));
  EXPECT_ANY_THROW(assign_labels(read_labels(fixture("path_labels_unknown.txt")), g.index));
}

TEST(Config, StrictKeysAndSingleSource) {
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"trails": 3})")), std::invalid_argument);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(
                   R"({"model": {"block_sizes": [2, 2], "t": 1}, "dataset": {"edges": "e", "labels": "l"}})")),
               std::invalid_argument);
  const RunConfig rc = parse_run_config(nlohmann::json::parse(
      R"({"preset": "small", "trials": 5, "schemes": ["ml", "sp"], "seeds": {"policy": "block", "total": 3, "block": 0}})"));
  EXPECT_EQ(rc.experiment.trials, 5);
  EXPECT_EQ(rc.experiment.schemes, (std::vector<Scheme>{Scheme::kMl, Scheme::kSpectral}));
  EXPECT_EQ(rc.experiment.seeds.policy, SeedPolicy::kBlockRestricted);
}

TEST(Simulate, SmokeRunWritesReports) {
  const fs::path dir = scratch_dir("simulate");
  SimulateArgs args;
  args.preset = "small";
  args.trials = 2;
  args.output_dir = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(args, out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  const auto table = read_csv(dir / "table.csv");
  ASSERT_FALSE(table.empty());
  EXPECT_EQ(table.front(), (std::vector<std::string>{"scheme", "param_mode", "mean_ap", "se_ap", "mean_ari", "se_ari",
                                                      "completed", "failed"}));
  const auto curve = read_csv(dir / "curve.csv");
  EXPECT_EQ(curve.front(), (std::vector<std::string>{"scheme", "param_mode", "rank", "prob", "stderr"}));
  // 7 scheme slots, 6 ranks each
  EXPECT_EQ(curve.size(), 1u + 7u * 6u);
}

TEST(Nominate, SweepEmitsOneRowPerSeedCountAndScheme) {
  const fs::path dir = scratch_dir("sweep");
  NominateArgs args;
  args.edges = fixture("karate_shape_edges.txt");
  args.labels = fixture("karate_shape_labels.txt");
  args.seeds = {2, 5, 10, 20};
  args.trials = 3;
  args.output_dir = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_nominate(args, out, err), 0) << err.str();
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 1u + 4u * 3u);
  EXPECT_EQ(rows.front().front(), "seeds");
  for (const std::string scheme : {"ml", "ml_r", "sp_proj"}) {
    int n = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) n += rows[r][1] == scheme;
    EXPECT_EQ(n, 4) << scheme;
  }
}

TEST(Nominate, TwoCliquesSpectralIsPerfect) {
  const fs::path dir = scratch_dir("cliques");
  NominateArgs args;
  args.edges = fixture("two_clique_edges.txt");
  args.labels = fixture("two_clique_labels.txt");
  args.seeds = {4};
  args.schemes = {"sp_proj", "sp"};
  args.trials = 10;
  args.output_dir = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_nominate(args, out, err), 0) << err.str();
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_EQ(std::stod(rows[r][3]), 1.0) << rows[r][1];
}

TEST(Nominate, ConstantModelIsNearChance) {
  const fs::path dir = scratch_dir("constant");
  NominateArgs args;
  args.edges = fixture("constant_edges.txt");
  args.labels = fixture("constant_labels.txt");
  args.seeds = {6};
  args.schemes = {"ml_r", "sp_proj"};
  args.trials = 200;
  args.output_dir = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_nominate(args, out, err), 0) << err.str();
  const auto rows = read_csv(dir / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_NEAR(std::stod(rows[r][3]), std::stod(rows[r][7]), 0.1) << rows[r][1];
}

TEST(Diagnostics, SimulationMatrixAndConstant) {
  DiagnosticsArgs args;
  args.t = 1.0;
  args.json = true;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_diagnostics(args, out, err), 0);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_NEAR(j["alpha"].get<double>(), 0.1, 1e-12);
  EXPECT_NEAR(j["gamma"].get<double>(), 0.1, 1e-12);
  EXPECT_TRUE(j["diagonal_distinct"].get<bool>());

  const fs::path dir = scratch_dir("diag");
  std::ofstream(dir / "flat.txt") << "0.4 0.4\n0.4 0.4\n";
  std::ofstream(dir / "two.json") << "[[0.6, 0.4], [0.4, 0.6]]";
  DiagnosticsArgs flat;
  flat.lambda_path = (dir / "flat.txt").string();
  std::ostringstream flat_out;
  ASSERT_EQ(cmd_diagnostics(flat, flat_out, err), 0);
  EXPECT_NE(flat_out.str().find("in its row: no"), std::string::npos) << flat_out.str();

  DiagnosticsArgs two;
  two.lambda_path = (dir / "two.json").string();
  two.json = true;
  std::ostringstream two_out;
  ASSERT_EQ(cmd_diagnostics(two, two_out, err), 0);
  EXPECT_TRUE(nlohmann::json::parse(two_out.str())["ratio"].is_number());
  EXPECT_EQ(read_lambda((dir / "two.json").string()), read_lambda((dir / "two.json").string()).transpose());
}

TEST(SampleAndRank, EndToEnd) {
  const fs::path dir = scratch_dir("rank");
  SampleArgs s;
  s.preset = "small";
  s.seed = 3;
  s.edges_out = (dir / "edges.txt").string();
  s.labels_out = (dir / "labels.txt").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sample(s, out, err), 0);
  std::ofstream(dir / "seeds.txt") << "0 0\n4 1\n7 2\n1 0\n";
  for (const std::string scheme : {"ml", "ml_r", "sp", "sp_proj"}) {
    RankArgs r;
    r.edges = s.edges_out;
    r.seeds = (dir / "seeds.txt").string();
    r.scheme = scheme;
    r.output = (dir / ("rank_" + scheme + ".csv")).string();
    ASSERT_EQ(cmd_rank(r, out, err), 0) << scheme << err.str();
    const auto rows = read_csv(*r.output);
    ASSERT_GE(rows.size(), 2u) << scheme;
    EXPECT_EQ(rows.front().front(), "rank");
  }
}

}  // namespace
}  // namespace vnom::cli
