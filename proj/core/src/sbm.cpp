#include "vnom/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vnom {

namespace {

bool is_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

void check_probability_matrix(const Matrix& lambda) {
  if (lambda.rows() == 0 || !is_symmetric(lambda))
    throw std::invalid_argument("edge-probability matrix must be square, non-empty and symmetric");
  for (Index i = 0; i < lambda.size(); ++i) {
    const double p = lambda.data()[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("edge-probability entries must lie in [0, 1]");
  }
}

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

BlockModel::BlockModel(std::vector<Index> block_sizes, Matrix lambda)
    : sizes_(std::move(block_sizes)), lambda_(std::move(lambda)) {
  check_probability_matrix(lambda_);
  if (static_cast<Index>(sizes_.size()) != lambda_.rows())
    throw std::invalid_argument("block_sizes length must equal the size of lambda");
  for (Index s : sizes_)
    if (s <= 0) throw std::invalid_argument("block sizes must be positive");
  n_ = std::accumulate(sizes_.begin(), sizes_.end(), Index{0});
}

BlockAssignment::BlockAssignment(std::vector<int> labels, int num_blocks)
    : labels_(std::move(labels)), num_blocks_(num_blocks) {
  if (num_blocks_ <= 0) throw std::invalid_argument("num_blocks must be positive");
  for (int l : labels_)
    if (l < 0 || l >= num_blocks_) throw std::invalid_argument("block label out of range");
}

BlockAssignment BlockAssignment::contiguous(std::span<const Index> block_sizes) {
  std::vector<int> labels;
  for (std::size_t k = 0; k < block_sizes.size(); ++k)
    labels.insert(labels.end(), static_cast<std::size_t>(block_sizes[k]), static_cast<int>(k));
  return BlockAssignment(std::move(labels), static_cast<int>(block_sizes.size()));
}

std::vector<Index> BlockAssignment::block_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(num_blocks_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

SeedSet::SeedSet(std::vector<Index> seeds, std::vector<int> labels, int num_blocks, Index n)
    : num_blocks_(num_blocks), n_(n) {
  if (seeds.size() != labels.size())
    throw std::invalid_argument("seed and label counts differ");
  if (num_blocks <= 0) throw std::invalid_argument("num_blocks must be positive");
  std::vector<std::size_t> idx(seeds.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return seeds[a] < seeds[b]; });

  seed_pos_.assign(static_cast<std::size_t>(n), -1);
  nonseed_pos_.assign(static_cast<std::size_t>(n), -1);
  per_block_.assign(static_cast<std::size_t>(num_blocks), 0);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Index v = seeds[idx[r]];
    const int l = labels[idx[r]];
    if (v < 0 || v >= n) throw std::invalid_argument("seed vertex out of range");
    if (l < 0 || l >= num_blocks) throw std::invalid_argument("seed label out of range");
    if (seed_pos_[static_cast<std::size_t>(v)] >= 0) throw std::invalid_argument("duplicate seed");
    seed_pos_[static_cast<std::size_t>(v)] = static_cast<Index>(r);
    seeds_.push_back(v);
    labels_.push_back(l);
    ++per_block_[static_cast<std::size_t>(l)];
  }
  for (Index v = 0; v < n; ++v) {
    if (seed_pos_[static_cast<std::size_t>(v)] < 0) {
      nonseed_pos_[static_cast<std::size_t>(v)] = static_cast<Index>(nonseeds_.size());
      nonseeds_.push_back(v);
    }
  }
}

SeedSet SeedSet::from_assignment(std::vector<Index> seeds, const BlockAssignment& b) {
  std::vector<int> labels;
  labels.reserve(seeds.size());
  for (Index v : seeds) {
    if (v < 0 || v >= b.size()) throw std::invalid_argument("seed vertex out of range");
    labels.push_back(b[v]);
  }
  return SeedSet(std::move(seeds), std::move(labels), b.num_blocks(), b.size());
}

int SeedSet::label_of(Index v) const {
  const Index pos = seed_pos_[static_cast<std::size_t>(v)];
  return pos < 0 ? -1 : labels_[static_cast<std::size_t>(pos)];
}

Graph::Graph(Index n, bool weighted) : adj_(Matrix::Zero(n, n)), weighted_(weighted) {}

Graph Graph::from_adjacency(Matrix adjacency, bool weighted) {
  if (!is_symmetric(adjacency)) throw std::invalid_argument("adjacency must be square and symmetric");
  for (Index i = 0; i < adjacency.rows(); ++i)
    if (adjacency(i, i) != 0.0) throw std::invalid_argument("adjacency diagonal must be zero");
  for (Index i = 0; i < adjacency.size(); ++i) {
    const double a = adjacency.data()[i];
    if (!std::isfinite(a)) throw std::invalid_argument("adjacency entries must be finite");
    if (!weighted && a != 0.0 && a != 1.0)
      throw std::invalid_argument("unweighted adjacency entries must be 0 or 1");
  }
  Graph g;
  g.adj_ = std::move(adjacency);
  g.weighted_ = weighted;
  return g;
}

void Graph::set_edge(Index i, Index j, double w) {
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  if (!weighted_ && w != 0.0 && w != 1.0)
    throw std::invalid_argument("unweighted graph edges must be 0 or 1");
  adj_(i, j) = w;
  adj_(j, i) = w;
}

Index Graph::edge_count() const {
  Index count = 0;
  for (Index j = 0; j < adj_.cols(); ++j)
    for (Index i = 0; i < j; ++i)
      if (adj_(i, j) != 0.0) ++count;
  return count;
}

double SeparationDiagnostics::ratio() const {
  const double denom = alpha * beta * kappa * gamma;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return c * c / denom;
}

Graph sample_sbm(const BlockModel& model, const BlockAssignment& assignment, Rng& rng) {
  if (assignment.num_blocks() != model.num_blocks() || assignment.block_sizes() != model.block_sizes())
    throw std::invalid_argument("assignment does not match the model block sizes");
  const Index n = assignment.size();
  const Matrix& lambda = model.lambda();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Graph g(n, false);
  Matrix adj = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double p = lambda(assignment[i], assignment[j]);
      if (unif(rng) < p) {
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  }
  return Graph::from_adjacency(std::move(adj), false);
}

Matrix logit_matrix(const Matrix& lambda, double clamp_eps) {
  Matrix out(lambda.rows(), lambda.cols());
  for (Index j = 0; j < lambda.cols(); ++j) {
    for (Index i = 0; i < lambda.rows(); ++i) {
      double p = lambda(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
      if (clamp_eps > 0.0) {
        p = std::clamp(p, clamp_eps, 1.0 - clamp_eps);
      } else if (p == 0.0 || p == 1.0) {
        throw std::invalid_argument("probability 0 or 1 has no finite log-odds (clamping disabled)");
      }
      out(i, j) = logit(p);
    }
  }
  return out;
}

LogOddsMatrix log_odds(const Matrix& lambda, std::span<const int> labels, Index seed_count,
                       double clamp_eps) {
  check_probability_matrix(lambda);
  const Matrix theta = logit_matrix(lambda, clamp_eps);
  const Index n = static_cast<Index>(labels.size());
  if (seed_count < 0 || seed_count > n) throw std::invalid_argument("seed_count out of range");
  for (int l : labels)
    if (l < 0 || l >= lambda.rows()) throw std::invalid_argument("label out of range");
  LogOddsMatrix out;
  out.seed_count = seed_count;
  out.b.resize(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      out.b(i, j) = i == j ? 0.0 : theta(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]);
  return out;
}

SeedSet select_seeds(const BlockAssignment& assignment, const SeedRequest& request, Rng& rng) {
  const Index n = assignment.size();
  const auto sizes = assignment.block_sizes();
  std::vector<Index> chosen;

  auto sample_from = [&](std::vector<Index> pool, Index count) {
    if (count < 0 || count > static_cast<Index>(pool.size()))
      throw std::invalid_argument("requested seed count is infeasible");
    // Partial Fisher-Yates: every size-count subset equally likely.
    for (Index r = 0; r < count; ++r) {
      std::uniform_int_distribution<Index> pick(r, static_cast<Index>(pool.size()) - 1);
      std::swap(pool[static_cast<std::size_t>(r)], pool[static_cast<std::size_t>(pick(rng))]);
      chosen.push_back(pool[static_cast<std::size_t>(r)]);
    }
  };

  switch (request.policy) {
    case SeedPolicy::kUniformAll: {
      std::vector<Index> pool(static_cast<std::size_t>(n));
      std::iota(pool.begin(), pool.end(), Index{0});
      sample_from(std::move(pool), request.total);
      break;
    }
    case SeedPolicy::kBlockRestricted: {
      if (request.restricted_block < 0 || request.restricted_block >= assignment.num_blocks())
        throw std::invalid_argument("restricted_block out of range");
      std::vector<Index> pool;
      for (Index v = 0; v < n; ++v)
        if (assignment[v] == request.restricted_block) pool.push_back(v);
      sample_from(std::move(pool), request.total);
      break;
    }
    case SeedPolicy::kStratified: {
      if (static_cast<int>(request.per_block.size()) != assignment.num_blocks())
        throw std::invalid_argument("stratified request needs one count per block");
      for (int k = 0; k < assignment.num_blocks(); ++k) {
        if (request.per_block[static_cast<std::size_t>(k)] > sizes[static_cast<std::size_t>(k)])
          throw std::invalid_argument("stratified seed count exceeds block size");
        std::vector<Index> pool;
        for (Index v = 0; v < n; ++v)
          if (assignment[v] == k) pool.push_back(v);
        sample_from(std::move(pool), request.per_block[static_cast<std::size_t>(k)]);
      }
      break;
    }
  }
  return SeedSet::from_assignment(std::move(chosen), assignment);
}

std::vector<Index> apportion_block_sizes(std::span<const Index> seeds_per_block, Index n) {
  const Index m = std::accumulate(seeds_per_block.begin(), seeds_per_block.end(), Index{0});
  if (m <= 0) throw std::invalid_argument("block sizes cannot be estimated without seeds");
  const std::size_t k = seeds_per_block.size();
  std::vector<Index> out(k);
  std::vector<Index> remainder(k);
  Index assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    // Exact integer arithmetic: m_k n = q m + r.
    out[i] = seeds_per_block[i] * n / m;
    remainder[i] = seeds_per_block[i] * n % m;
    assigned += out[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (Index r = 0; r < n - assigned; ++r) ++out[order[static_cast<std::size_t>(r)]];
  return out;
}

EstimatedModel estimate_model(const Graph& graph, const SeedSet& seeds, Index n, bool smoothing) {
  const int k = seeds.num_blocks();
  Matrix edges = Matrix::Zero(k, k);
  const auto& s = seeds.seeds();
  const auto& lab = seeds.seed_labels();
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (graph(s[a], s[b]) == 0.0) continue;
      const int ka = lab[a];
      const int kb = lab[b];
      edges(ka, kb) += 1.0;
      if (ka != kb) edges(kb, ka) += 1.0;
    }
  }
  EstimatedModel est;
  est.smoothing = smoothing;
  est.lambda_hat.resize(k, k);
  const auto& mk = seeds.per_block();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double mi = static_cast<double>(mk[static_cast<std::size_t>(i)]);
      const double mj = static_cast<double>(mk[static_cast<std::size_t>(j)]);
      const double trials = i == j ? mi * (mi - 1.0) / 2.0 : mi * mj;
      if (smoothing) {
        est.lambda_hat(i, j) = (edges(i, j) + 1.0) / (trials + 2.0);
      } else {
        if (trials <= 0.0)
          throw std::invalid_argument("block pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                      ") has no seed pairs; enable smoothing");
        est.lambda_hat(i, j) = edges(i, j) / trials;
      }
    }
  }
  est.n_hat = apportion_block_sizes(seeds.per_block(), n);
  return est;
}

SeparationDiagnostics separation_diagnostics(const Matrix& lambda) {
  check_probability_matrix(lambda);
  const Index k = lambda.rows();
  const Matrix b = logit_matrix(lambda);
  SeparationDiagnostics d;
  const double inf = std::numeric_limits<double>::infinity();
  double alpha = inf;
  double beta = inf;
  bool distinct = true;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      if (i == j) continue;
      alpha = std::min(alpha, std::abs(lambda(i, i) - lambda(i, j)));
      beta = std::min(beta, std::abs(b(i, i) - b(i, j)));
      if (lambda(i, i) == lambda(i, j)) distinct = false;
    }
  }
  d.alpha = k > 1 ? alpha : 0.0;
  d.beta = k > 1 ? beta : 0.0;
  d.diagonal_distinct = k > 1 && distinct;
  d.c = b.maxCoeff() - b.minCoeff();

  std::vector<double> entries(lambda.data(), lambda.data() + lambda.size());
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  double gamma = inf;
  double kappa = inf;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    gamma = std::min(gamma, entries[i] - entries[i - 1]);
    // logit is increasing, so adjacent entries give the minimum as well.
    kappa = std::min(kappa, logit(std::clamp(entries[i], kDefaultClamp, 1 - kDefaultClamp)) -
                                logit(std::clamp(entries[i - 1], kDefaultClamp, 1 - kDefaultClamp)));
  }
  d.gamma = entries.size() > 1 ? gamma : 0.0;
  d.kappa = entries.size() > 1 ? kappa : 0.0;
  return d;
}

Matrix simulation_lambda(double t) {
  Matrix base(3, 3);
  base << 0.5, 0.3, 0.4,
          0.3, 0.8, 0.6,
          0.4, 0.6, 0.3;
  return t * base + (1.0 - t) * Matrix::Constant(3, 3, 0.5);
}

}  // namespace vnom
