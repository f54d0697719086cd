#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vnom/types.hpp"

namespace vnom {

// Block labels are 0-based; block 0 is the block of interest throughout.

inline constexpr double kDefaultClamp = 1e-9;

// K blocks with fixed sizes and a symmetric edge-probability matrix.
class BlockModel {
 public:
  BlockModel(std::vector<Index> block_sizes, Matrix lambda);

  Index num_blocks() const { return static_cast<Index>(sizes_.size()); }
  Index num_vertices() const { return n_; }
  const std::vector<Index>& block_sizes() const { return sizes_; }
  const Matrix& lambda() const { return lambda_; }

 private:
  std::vector<Index> sizes_;
  Matrix lambda_;
  Index n_ = 0;
};

// Block membership b : [n] -> [K].
class BlockAssignment {
 public:
  BlockAssignment(std::vector<int> labels, int num_blocks);

  // Block k occupies a contiguous run of vertices, in block order.
  static BlockAssignment contiguous(std::span<const Index> block_sizes);

  int operator[](Index v) const { return labels_[static_cast<std::size_t>(v)]; }
  Index size() const { return static_cast<Index>(labels_.size()); }
  int num_blocks() const { return num_blocks_; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<Index> block_sizes() const;

 private:
  std::vector<int> labels_;
  int num_blocks_ = 0;
};

// Seed vertices with observed labels, and the complementary nonseed set.
class SeedSet {
 public:
  SeedSet() = default;
  // seeds need not be sorted; labels align with seeds.
  SeedSet(std::vector<Index> seeds, std::vector<int> labels, int num_blocks, Index n);

  static SeedSet from_assignment(std::vector<Index> seeds, const BlockAssignment& b);

  Index total() const { return static_cast<Index>(seeds_.size()); }
  Index num_vertices() const { return n_; }
  Index num_nonseeds() const { return n_ - total(); }
  int num_blocks() const { return num_blocks_; }

  const std::vector<Index>& seeds() const { return seeds_; }        // ascending
  const std::vector<int>& seed_labels() const { return labels_; }   // aligned with seeds()
  const std::vector<Index>& nonseeds() const { return nonseeds_; }  // ascending
  const std::vector<Index>& per_block() const { return per_block_; }

  bool is_seed(Index v) const { return seed_pos_[static_cast<std::size_t>(v)] >= 0; }
  // Label of a seed vertex, -1 for a nonseed.
  int label_of(Index v) const;
  // Position of v in nonseeds(), -1 for a seed.
  Index nonseed_position(Index v) const { return nonseed_pos_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<Index> seeds_;
  std::vector<int> labels_;
  std::vector<Index> nonseeds_;
  std::vector<Index> per_block_;
  std::vector<Index> seed_pos_;
  std::vector<Index> nonseed_pos_;
  int num_blocks_ = 0;
  Index n_ = 0;
};

// Symmetric adjacency with a hollow diagonal. Unweighted graphs hold 0/1.
class Graph {
 public:
  explicit Graph(Index n = 0, bool weighted = false);
  static Graph from_adjacency(Matrix adjacency, bool weighted);

  Index size() const { return adj_.rows(); }
  bool weighted() const { return weighted_; }
  double operator()(Index i, Index j) const { return adj_(i, j); }
  const Matrix& adjacency() const { return adj_; }

  void set_edge(Index i, Index j, double w = 1.0);
  Index edge_count() const;

 private:
  Matrix adj_;
  bool weighted_ = false;
};

// B_ij = logit(Lambda[l(i), l(j)]) with zero diagonal. Vertices are in the
// order given by the labeling passed to log_odds(); the first seed_count of
// them are the seeds.
struct LogOddsMatrix {
  Matrix b;
  Index seed_count = 0;
};

struct SeparationDiagnostics {
  double alpha = 0.0;
  double beta = 0.0;
  double c = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  // Lambda_kk != Lambda_kl for every k != l.
  bool diagonal_distinct = false;
  // c^2 / (alpha beta kappa gamma); +inf when the denominator vanishes.
  double ratio() const;
};

struct EstimatedModel {
  Matrix lambda_hat;
  std::vector<Index> n_hat;
  bool smoothing = true;
};

enum class SeedPolicy { kUniformAll, kBlockRestricted, kStratified };

struct SeedRequest {
  SeedPolicy policy = SeedPolicy::kUniformAll;
  Index total = 0;                // uniform-all and block-restricted
  std::vector<Index> per_block;   // stratified
  int restricted_block = 0;       // block-restricted
};

Graph sample_sbm(const BlockModel& model, const BlockAssignment& assignment, Rng& rng);

// Clamps entries into [eps, 1 - eps] before the logit.
Matrix logit_matrix(const Matrix& lambda, double clamp_eps = kDefaultClamp);

// labels: block label per vertex position. With clamp_eps <= 0 an entry equal
// to 0 or 1 is an error.
LogOddsMatrix log_odds(const Matrix& lambda, std::span<const int> labels, Index seed_count,
                       double clamp_eps = kDefaultClamp);

SeedSet select_seeds(const BlockAssignment& assignment, const SeedRequest& request, Rng& rng);

EstimatedModel estimate_model(const Graph& graph, const SeedSet& seeds, Index n, bool smoothing);

// Largest-remainder apportionment of n over weights m_k n / m; ties go to the
// lower block index.
std::vector<Index> apportion_block_sizes(std::span<const Index> seeds_per_block, Index n);

SeparationDiagnostics separation_diagnostics(const Matrix& lambda);

// Lambda(t) = t * Lambda_1 + (1 - t) * 0.5 for the 3-block simulation design.
Matrix simulation_lambda(double t);

}  // namespace vnom
