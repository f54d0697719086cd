#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnom/exp_family.hpp"
#include "vnom/features.hpp"
#include "vnom/likelihood.hpp"
#include "vnom/matching.hpp"
#include "vnom/sbm.hpp"

namespace vnom {

// Ranking of the nonseeds, best candidate first.
struct NominationList {
  std::vector<Index> order;    // rank -> vertex
  std::vector<double> scores;  // by rank; meaning depends on the scheme
  std::vector<int> labels;     // by rank; estimated block or cluster, -1 if none
  bool degenerate = false;

  Index size() const { return static_cast<Index>(order.size()); }
};

// Edge model plus the block sizes used to build the matching pattern.
struct NominationParameters {
  EdgeModel edges;
  std::vector<Index> block_sizes;
};

NominationParameters known_parameters(const Matrix& lambda, std::vector<Index> block_sizes,
                                      double clamp_eps = kDefaultClamp);

// Lambda-hat from the seed-induced subgraph; block sizes are n-hat when
// estimate_sizes is set, otherwise known_sizes.
NominationParameters estimated_parameters(const Graph& graph, const SeedSet& seeds,
                                          bool smoothing, bool estimate_sizes,
                                          std::span<const Index> known_sizes = {});

// Row order of the matching: seeds first (ascending), then nonseeds
// (ascending from seeded_layout; the matching schemes shuffle them). Nonseed
// pattern positions are labelled contiguously by n_k - m_k.
struct SeededLayout {
  std::vector<Index> order;
  std::vector<int> position_labels;
};

SeededLayout seeded_layout(const SeedSet& seeds, std::span<const Index> block_sizes);

MatchingProblem build_matching_problem(const Graph& graph, const NominationParameters& params,
                                       const SeedSet& seeds, const SeededLayout& layout);

// Full labeling from a nonseed permutation: seeds keep their labels, the
// vertex at layout row m + i takes the label of position perm[i].
std::vector<int> labeling_from_permutation(const SeedSet& seeds, const SeededLayout& layout,
                                           const Permutation& perm);

// phi = 0 vertices by ascending score, then the rest by descending score;
// exact ties in uniformly random order.
NominationList rank_by_swap_scores(const SeedSet& seeds, std::span<const int> phi,
                                   const SwapScores& scores, Rng& rng);

// Descending score with random tie order.
NominationList rank_descending(std::span<const Index> vertices, std::span<const double> scores,
                               Rng& rng);

NominationList nominate_ml(const Graph& graph, const NominationParameters& params,
                           const SeedSet& seeds, const FwOptions& opts, Rng& rng);

// With no seeds the LAP carries no information: a uniformly random list,
// flagged degenerate.
NominationList nominate_ml_restricted(const Graph& graph, const NominationParameters& params,
                                      const SeedSet& seeds, Rng& rng);

class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kCanonicalEnumerationLimit = 1e7;

// Number of feasible labelings of the nonseeds, as a double.
double feasible_labeling_count(const SeedSet& seeds, std::span<const Index> block_sizes);

// P(v in block 0 | G) under the uniform prior on feasible labelings, per
// nonseed in seeds.nonseeds() order.
std::vector<double> canonical_posteriors(const Graph& graph, const NominationParameters& params,
                                         const SeedSet& seeds,
                                         double limit = kCanonicalEnumerationLimit);

NominationList nominate_canonical(const Graph& graph, const NominationParameters& params,
                                  const SeedSet& seeds, Rng& rng,
                                  double limit = kCanonicalEnumerationLimit);

enum class FeatureVariant {
  kLogDensity,  // linear term log f_k(X_i)
  kDensity,     // linear term f_k(X_i)
  kMean,        // linear term <X_i, mu_k>
};

// weight defaults to the number of nonseeds; a negative weight is rejected.
NominationList nominate_features(const Graph& graph, const NominationParameters& params,
                                 const SeedSet& seeds, const FeatureSet& features,
                                 std::optional<double> weight, FeatureVariant variant,
                                 const FwOptions& opts, Rng& rng);

}  // namespace vnom
