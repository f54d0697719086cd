#pragma once

#include <span>
#include <vector>

#include "vnom/exp_family.hpp"
#include "vnom/sbm.hpp"

namespace vnom {

// phi is a full labeling over all n vertices; it must agree with the seed
// labels. Pairs of two seeds never contribute.
enum class LikelihoodMode {
  kFull,        // nonseed pairs plus seed-nonseed pairs
  kRestricted,  // seed-nonseed pairs only
};

// Optional per-vertex feature log-densities: log_density(k, v) = log f_k(X_v).
// Only nonseed columns are read.
struct FeatureLikelihood {
  const Matrix* log_density = nullptr;
};

double log_likelihood(const Graph& graph, const EdgeModel& model, const SeedSet& seeds,
                      std::span<const int> phi, LikelihoodMode mode = LikelihoodMode::kFull,
                      FeatureLikelihood features = {});

// Checks phi against the seeds and, when block_sizes is non-empty, against the
// block sizes. Throws std::invalid_argument.
void check_feasible(const SeedSet& seeds, std::span<const int> phi,
                    std::span<const Index> block_sizes, int num_blocks);

// log l(phi_{i<->j}) - log l(phi) for nonseeds i, j with phi_i != phi_j, from
// the O(n) terms that change.
double swap_log_ratio(const Graph& graph, const EdgeModel& model, const SeedSet& seeds,
                      std::span<const int> phi, Index i, Index j,
                      LikelihoodMode mode = LikelihoodMode::kFull,
                      FeatureLikelihood features = {});

struct SwapScores {
  // Per nonseed, in seeds.nonseeds() order: log eta for phi = 0, log xi
  // otherwise.
  std::vector<double> log_score;
  bool degenerate = false;
};

// Geometric-mean swap statistics, evaluated in log space. If every nonseed or
// no nonseed is labelled 0, all scores are 0 and degenerate is set.
SwapScores eta_xi_scores(const Graph& graph, const EdgeModel& model, const SeedSet& seeds,
                         std::span<const int> phi, LikelihoodMode mode = LikelihoodMode::kFull,
                         FeatureLikelihood features = {});

}  // namespace vnom
