#include "vnom/nomination.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vnom {

namespace {

std::vector<Index> sorted_by(std::vector<Index> idx, std::span<const double> key, bool ascending, Rng& rng) {
  std::shuffle(idx.begin(), idx.end(), rng);
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const double ka = key[static_cast<std::size_t>(a)];
    const double kb = key[static_cast<std::size_t>(b)];
    return ascending ? ka < kb : ka > kb;
  });
  return idx;
}

void check_sizes(const SeedSet& seeds, std::span<const Index> block_sizes) {
  if (static_cast<int>(block_sizes.size()) != seeds.num_blocks())
    throw std::invalid_argument("need one block size per block");
  Index total = 0;
  for (std::size_t k = 0; k < block_sizes.size(); ++k) {
    if (block_sizes[k] < seeds.per_block()[k]) throw std::invalid_argument("block size smaller than its seed count");
    total += block_sizes[k];
  }
  if (total != seeds.num_vertices()) throw std::invalid_argument("block sizes must sum to the vertex count");
}

NominationList random_list(const SeedSet& seeds, Rng& rng) {
  NominationList out;
  out.order = seeds.nonseeds();
  std::shuffle(out.order.begin(), out.order.end(), rng);
  out.scores.assign(out.order.size(), 0.0);
  out.labels.assign(out.order.size(), -1);
  out.degenerate = true;
  return out;
}

}  // namespace

NominationParameters known_parameters(const Matrix& lambda, std::vector<Index> block_sizes, double clamp_eps) {
  if (static_cast<Index>(block_sizes.size()) != lambda.rows())
    throw std::invalid_argument("need one block size per row of lambda");
  return {EdgeModel::bernoulli(lambda, clamp_eps), std::move(block_sizes)};
}

NominationParameters estimated_parameters(const Graph& graph, const SeedSet& seeds, bool smoothing,
                                          bool estimate_sizes, std::span<const Index> known_sizes) {
  EstimatedModel est = estimate_model(graph, seeds, graph.size(), smoothing);
  std::vector<Index> sizes = estimate_sizes ? est.n_hat : std::vector<Index>(known_sizes.begin(), known_sizes.end());
  return {EdgeModel::bernoulli(est.lambda_hat), std::move(sizes)};
}

SeededLayout seeded_layout(const SeedSet& seeds, std::span<const Index> block_sizes) {
  check_sizes(seeds, block_sizes);
  SeededLayout out;
  out.order = seeds.seeds();
  out.order.insert(out.order.end(), seeds.nonseeds().begin(), seeds.nonseeds().end());
  out.position_labels = seeds.seed_labels();
  for (std::size_t k = 0; k < block_sizes.size(); ++k)
    out.position_labels.insert(out.position_labels.end(),
                               static_cast<std::size_t>(block_sizes[k] - seeds.per_block()[k]), static_cast<int>(k));
  return out;
}

namespace {

// Nonseeds in random order, so tied optima (e.g. a constant Lambda) resolve
// to a uniformly random labeling rather than to vertex order.
SeededLayout shuffled_layout(const SeedSet& seeds, std::span<const Index> block_sizes, Rng& rng) {
  SeededLayout layout = seeded_layout(seeds, block_sizes);
  std::shuffle(layout.order.begin() + seeds.total(), layout.order.end(), rng);
  return layout;
}

}  // namespace

MatchingProblem build_matching_problem(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                                       const SeededLayout& layout) {
  const Index n = graph.size();
  if (static_cast<Index>(layout.order.size()) != n) throw std::invalid_argument("layout does not match the graph");
  Matrix a(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r)
      a(r, c) = graph(layout.order[static_cast<std::size_t>(r)], layout.order[static_cast<std::size_t>(c)]);
  return MatchingProblem(std::move(a), BlockPattern{layout.position_labels, params.edges.theta}, seeds.total());
}

std::vector<int> labeling_from_permutation(const SeedSet& seeds, const SeededLayout& layout, const Permutation& perm) {
  const Index m = seeds.total();
  if (static_cast<Index>(perm.size()) != seeds.num_nonseeds()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> phi(static_cast<std::size_t>(seeds.num_vertices()));
  for (std::size_t s = 0; s < seeds.seeds().size(); ++s)
    phi[static_cast<std::size_t>(seeds.seeds()[s])] = seeds.seed_labels()[s];
  for (std::size_t i = 0; i < perm.size(); ++i)
    phi[static_cast<std::size_t>(layout.order[static_cast<std::size_t>(m) + i])] =
        layout.position_labels[static_cast<std::size_t>(m + perm[i])];
  return phi;
}

NominationList rank_by_swap_scores(const SeedSet& seeds, std::span<const int> phi, const SwapScores& scores,
                                   Rng& rng) {
  const std::vector<Index>& nonseeds = seeds.nonseeds();
  if (scores.log_score.size() != nonseeds.size()) throw std::invalid_argument("one score per nonseed required");
  std::vector<Index> zero, other;
  for (std::size_t p = 0; p < nonseeds.size(); ++p)
    (phi[static_cast<std::size_t>(nonseeds[p])] == 0 ? zero : other).push_back(static_cast<Index>(p));
  zero = sorted_by(std::move(zero), scores.log_score, true, rng);
  other = sorted_by(std::move(other), scores.log_score, false, rng);

  NominationList out;
  out.degenerate = scores.degenerate;
  for (const auto* part : {&zero, &other})
    for (Index p : *part) {
      const Index v = nonseeds[static_cast<std::size_t>(p)];
      out.order.push_back(v);
      out.scores.push_back(scores.log_score[static_cast<std::size_t>(p)]);
      out.labels.push_back(phi[static_cast<std::size_t>(v)]);
    }
  return out;
}

NominationList rank_descending(std::span<const Index> vertices, std::span<const double> scores, Rng& rng) {
  if (vertices.size() != scores.size()) throw std::invalid_argument("one score per vertex required");
  std::vector<Index> idx(vertices.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  idx = sorted_by(std::move(idx), scores, false, rng);
  NominationList out;
  for (Index p : idx) {
    out.order.push_back(vertices[static_cast<std::size_t>(p)]);
    out.scores.push_back(scores[static_cast<std::size_t>(p)]);
    out.labels.push_back(-1);
  }
  return out;
}

NominationList nominate_ml(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                           const FwOptions& opts, Rng& rng) {
  const SeededLayout layout = shuffled_layout(seeds, params.block_sizes, rng);
  const MatchingProblem problem = build_matching_problem(graph, params, seeds, layout);
  const MatchingResult match = solve_sgm_fw(problem, opts, rng);
  const std::vector<int> phi = labeling_from_permutation(seeds, layout, match.perm);
  return rank_by_swap_scores(seeds, phi, eta_xi_scores(graph, params.edges, seeds, phi), rng);
}

NominationList nominate_ml_restricted(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                                      Rng& rng) {
  if (seeds.total() == 0) {
    check_sizes(seeds, params.block_sizes);
    return random_list(seeds, rng);
  }
  const SeededLayout layout = shuffled_layout(seeds, params.block_sizes, rng);
  const MatchingProblem problem = build_matching_problem(graph, params, seeds, layout);
  const MatchingResult match = solve_restricted(problem);
  const std::vector<int> phi = labeling_from_permutation(seeds, layout, match.perm);
  NominationList out = rank_by_swap_scores(
      seeds, phi, eta_xi_scores(graph, params.edges, seeds, phi, LikelihoodMode::kRestricted), rng);
  out.degenerate = out.degenerate || match.degenerate;
  return out;
}

NominationList nominate_features(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                                 const FeatureSet& features, std::optional<double> weight, FeatureVariant variant,
                                 const FwOptions& opts, Rng& rng) {
  const Index u = seeds.num_nonseeds();
  const double lambda = weight.value_or(static_cast<double>(u));
  if (!(lambda >= 0.0)) throw std::invalid_argument("feature weight must be non-negative");
  const FeatureDensities dens = estimate_feature_densities(features, seeds);
  const SeededLayout layout = shuffled_layout(seeds, params.block_sizes, rng);
  MatchingProblem problem = build_matching_problem(graph, params, seeds, layout);

  const Index m = seeds.total();
  Matrix linear(u, u);
  for (Index i = 0; i < u; ++i) {
    const Index v = layout.order[static_cast<std::size_t>(m + i)];
    const Index col = seeds.nonseed_position(v);
    for (Index pos = 0; pos < u; ++pos) {
      const int k = layout.position_labels[static_cast<std::size_t>(m + pos)];
      switch (variant) {
        case FeatureVariant::kLogDensity: linear(i, pos) = dens.log_density(k, v); break;
        case FeatureVariant::kDensity: linear(i, pos) = dens.f(k, col); break;
        case FeatureVariant::kMean: linear(i, pos) = features.x.row(v).dot(dens.means.row(k)); break;
      }
    }
  }
  problem.set_linear_term(std::move(linear), lambda);

  const MatchingResult match = solve_sgm_fw(problem, opts, rng);
  const std::vector<int> phi = labeling_from_permutation(seeds, layout, match.perm);
  FeatureLikelihood fl;
  if (lambda > 0.0) fl.log_density = &dens.log_density;
  return rank_by_swap_scores(seeds, phi, eta_xi_scores(graph, params.edges, seeds, phi, LikelihoodMode::kFull, fl),
                             rng);
}

}  // namespace vnom
