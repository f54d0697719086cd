#include <benchmark/benchmark.h>

#include "vnom/assignment.hpp"
#include "vnom/likelihood.hpp"
#include "vnom/matching.hpp"
#include "vnom/nomination.hpp"
#include "vnom/sbm.hpp"
#include "vnom/spectral.hpp"

namespace vnom {
namespace {

Matrix random_cost(Index u, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix c(u, u);
  for (Index i = 0; i < u; ++i) {
    for (Index j = 0; j < u; ++j) c(i, j) = unif(rng);
  }
  return c;
}

struct Instance {
  std::vector<Index> sizes;
  Graph graph;
  SeedSet seeds;
  NominationParameters params;
};

Instance medium_instance(Index q) {
  Rng rng(7);
  std::vector<Index> sizes{4 * q, 3 * q, 3 * q};
  const Matrix lambda = simulation_lambda(0.3);
  const BlockAssignment truth = BlockAssignment::contiguous(sizes);
  Graph g = sample_sbm(BlockModel(sizes, lambda), truth, rng);
  SeedSet seeds = select_seeds(truth, SeedRequest{SeedPolicy::kUniformAll, 20, {}, 0}, rng);
  NominationParameters params = known_parameters(lambda, sizes);
  return {sizes, std::move(g), std::move(seeds), std::move(params)};
}

void BM_SolveLapRandom(benchmark::State& state) {
  Rng rng(1);
  const Matrix c = random_cost(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lap(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveLapRandom)->RangeMultiplier(2)->Range(32, 1024)->Complexity(benchmark::oNCubed);

// Columns repeating within three classes, as produced by block patterns.
void BM_SolveLapStructured(benchmark::State& state) {
  Rng rng(2);
  const Index u = state.range(0);
  const Matrix k = random_cost(u, rng).leftCols(3);
  Matrix c(u, u);
  for (Index j = 0; j < u; ++j) c.col(j) = k.col(j % 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lap(c));
}
BENCHMARK(BM_SolveLapStructured)->RangeMultiplier(2)->Range(32, 512);

void BM_CapacitatedAssignment(benchmark::State& state) {
  Rng rng(3);
  const Index u = state.range(0);
  const Matrix c = random_cost(u, rng).leftCols(3);
  const std::vector<Index> cap{u - 2 * (u / 3), u / 3, u / 3};
  for (auto _ : state) benchmark::DoNotOptimize(solve_capacitated_assignment(c, cap));
}
BENCHMARK(BM_CapacitatedAssignment)->RangeMultiplier(2)->Range(32, 1024);

void BM_FrankWolfeMedium(benchmark::State& state) {
  const Instance inst = medium_instance(state.range(0));
  const MatchingProblem prob =
      build_matching_problem(inst.graph, inst.params, inst.seeds, seeded_layout(inst.seeds, inst.sizes));
  FwOptions opts;
  opts.restarts = 1;
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sgm_fw(prob, opts, rng));
}
BENCHMARK(BM_FrankWolfeMedium)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_EtaXiScores(benchmark::State& state) {
  const Instance inst = medium_instance(state.range(0));
  Rng rng(5);
  const NominationList list = nominate_ml(inst.graph, inst.params, inst.seeds, FwOptions{}, rng);
  std::vector<int> phi(static_cast<std::size_t>(inst.graph.size()));
  for (Index v = 0; v < inst.graph.size(); ++v) {
    if (inst.seeds.is_seed(v)) phi[static_cast<std::size_t>(v)] = inst.seeds.label_of(v);
  }
  for (std::size_t r = 0; r < list.order.size(); ++r)
    phi[static_cast<std::size_t>(list.order[r])] = list.labels[r];
  for (auto _ : state) benchmark::DoNotOptimize(eta_xi_scores(inst.graph, inst.params.edges, inst.seeds, phi));
}
BENCHMARK(BM_EtaXiScores)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SpectralEmbed(benchmark::State& state) {
  const Instance inst = medium_instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(adjacency_spectral_embed(inst.graph, 3));
}
BENCHMARK(BM_SpectralEmbed)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vnom

BENCHMARK_MAIN();
