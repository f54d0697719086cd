#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vnom/types.hpp"

namespace vnom {

// Block-constant weights: W_ij = values(labels[i], labels[j]).
struct BlockPattern {
  std::vector<int> labels;
  Matrix values;
};

// Seeded graph matching of A against B, seeds occupying the first m indices of
// both. A permutation perm over the u nonseeds sends nonseed i (index m + i of
// A) to position perm[i] (index m + perm[i] of B). Lower objective is better:
//
//   -1/2 sum_{i != j} A22(i,j) B22(perm i, perm j)
//   - sum_i C(i, perm i) - weight * sum_i L(i, perm i),   C = A12^T B12.
//
// A and B must be symmetric. B's diagonal never enters the objective at a
// permutation, but it does enter the doubly stochastic relaxation.
class MatchingProblem {
 public:
  MatchingProblem(Matrix a, Matrix b, Index seed_count);
  // B built from a block pattern; its diagonal holds the pattern value so the
  // relaxation can use the factored O(u^2 K) products.
  MatchingProblem(Matrix a, BlockPattern pattern, Index seed_count);

  // Adds -weight * sum_i linear(i, perm i). weight must be >= 0.
  void set_linear_term(Matrix linear, double weight);

  Index size() const { return a_.rows(); }
  Index seed_count() const { return m_; }
  Index nonseed_count() const { return a_.rows() - m_; }
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  bool has_pattern() const { return pattern_.has_value(); }
  const std::optional<BlockPattern>& pattern() const { return pattern_; }
  double linear_weight() const { return weight_; }
  const Matrix& linear_term() const { return linear_; }

  // A22, B22 and the u x u seed-to-nonseed term C = A12^T B12.
  const Matrix& a22() const { return a22_; }
  const Matrix& b22() const { return b22_; }
  const Matrix& seed_term() const { return seed_term_; }
  // seed_term + weight * linear; the full linear part of the objective.
  const Matrix& total_linear() const { return total_linear_; }

  // A22 * D * B22 (u x u), using the pattern factorization when present.
  Matrix quadratic_product(const Matrix& d) const;

  // True when every gradient of the relaxation is constant across the
  // nonseed positions of each pattern block, so linear subproblems reduce to
  // capacitated assignments over the blocks.
  bool block_structured() const { return block_structured_; }
  // Pattern block of each nonseed position (empty without a pattern).
  const std::vector<int>& position_labels() const { return nonseed_labels_; }

 private:
  void init();
  bool constant_within_blocks(const Matrix& m) const;

  Matrix a_;
  Matrix b_;
  Index m_ = 0;
  std::optional<BlockPattern> pattern_;
  std::vector<int> nonseed_labels_;
  Matrix pattern_values_;
  Matrix a22_;
  Matrix b22_;
  Matrix seed_term_;
  Matrix linear_;
  Matrix total_linear_;
  double weight_ = 0.0;
  bool block_structured_ = false;
};

double sgm_objective(const MatchingProblem& problem, const Permutation& perm);

// Only the seed-to-nonseed part, -sum_i C(i, perm i).
double restricted_objective(const MatchingProblem& problem, const Permutation& perm);

enum class FwInit { kBarycenter, kIdentity, kRandom };

struct FwOptions {
  int max_iters = 50;
  double tol = 1e-6;
  int restarts = 3;
  FwInit init = FwInit::kBarycenter;
};

struct MatchingResult {
  Permutation perm;
  double objective = 0.0;
  // Relaxed objective per iteration, one vector per restart (entry 0 is the
  // starting point).
  std::vector<std::vector<double>> traces;
  int restarts_used = 0;
  int best_restart = 0;
  bool converged = true;
  // No information in the objective (e.g. no seeds for the restricted solver).
  bool degenerate = false;
};

// Frank-Wolfe on the doubly stochastic relaxation followed by LAP rounding;
// best permutation over restarts (lowest restart index on ties). Each restart
// keeps the better of the rounded final iterate and the best vertex visited.
// Restart 0 uses opts.init; later restarts start from random doubly
// stochastic points.
MatchingResult solve_sgm_fw(const MatchingProblem& problem, const FwOptions& opts, Rng& rng);

// Exact minimizer of restricted_objective via one LAP.
MatchingResult solve_restricted(const MatchingProblem& problem);

inline constexpr Index kBruteForceSgmLimit = 8;

MatchingResult brute_force_sgm(const MatchingProblem& problem);
MatchingResult brute_force_restricted(const MatchingProblem& problem);

struct BlockConfusion {
  // eps(k, l): vertices of true block k sent to a position of block l.
  Eigen::MatrixXi eps;
  std::vector<Index> eps_out;
};

// true_labels[i]: block of nonseed i; position_labels[p]: block of pattern
// position p.
BlockConfusion block_confusion(const Permutation& perm, std::span<const int> true_labels,
                               std::span<const int> position_labels, int num_blocks);
// Positions labelled contiguously by the nonseed block sizes of B.
BlockConfusion block_confusion(const Permutation& perm, std::span<const int> true_labels,
                               std::span<const Index> pattern_block_sizes);

// Random doubly stochastic matrix: a random convex combination of up to ten
// random permutation matrices.
Matrix random_doubly_stochastic(Index u, Rng& rng);

}  // namespace vnom
