#include "vnom/likelihood.hpp"

#include <stdexcept>

namespace vnom {

namespace {

void check_model(const EdgeModel& model, int num_blocks) {
  if (model.theta.rows() != num_blocks || model.theta.cols() != num_blocks ||
      model.log_partition.rows() != num_blocks || model.log_partition.cols() != num_blocks)
    throw std::invalid_argument("edge model must be K x K");
}

void check_labels(const SeedSet& seeds, std::span<const int> phi, int num_blocks) {
  if (static_cast<Index>(phi.size()) != seeds.num_vertices())
    throw std::invalid_argument("labeling must cover every vertex");
  for (int l : phi)
    if (l < 0 || l >= num_blocks) throw std::invalid_argument("label out of range");
  for (std::size_t s = 0; s < seeds.seeds().size(); ++s)
    if (phi[static_cast<std::size_t>(seeds.seeds()[s])] != seeds.seed_labels()[s])
      throw std::invalid_argument("labeling disagrees with a seed label");
}

void check_features(const FeatureLikelihood& features, int num_blocks, Index n) {
  if (features.log_density &&
      (features.log_density->rows() != num_blocks || features.log_density->cols() != n))
    throw std::invalid_argument("feature log-densities must be K x n");
}

}  // namespace

void check_feasible(const SeedSet& seeds, std::span<const int> phi, std::span<const Index> block_sizes,
                    int num_blocks) {
  check_labels(seeds, phi, num_blocks);
  if (block_sizes.empty()) return;
  if (static_cast<int>(block_sizes.size()) != num_blocks) throw std::invalid_argument("block size count mismatch");
  std::vector<Index> counts(static_cast<std::size_t>(num_blocks), 0);
  for (int l : phi) ++counts[static_cast<std::size_t>(l)];
  for (int k = 0; k < num_blocks; ++k)
    if (counts[static_cast<std::size_t>(k)] != block_sizes[static_cast<std::size_t>(k)])
      throw std::invalid_argument("labeling does not respect the block sizes");
}

double log_likelihood(const Graph& graph, const EdgeModel& model, const SeedSet& seeds, std::span<const int> phi,
                      LikelihoodMode mode, FeatureLikelihood features) {
  const int k = static_cast<int>(model.num_blocks());
  check_model(model, k);
  check_labels(seeds, phi, k);
  check_features(features, k, graph.size());
  const Index n = graph.size();
  if (seeds.num_vertices() != n) throw std::invalid_argument("seed set and graph differ in size");

  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    const bool sj = seeds.is_seed(j);
    for (Index i = 0; i < j; ++i) {
      const bool si = seeds.is_seed(i);
      if (si && sj) continue;
      if (mode == LikelihoodMode::kRestricted && !si && !sj) continue;
      const int p = phi[static_cast<std::size_t>(i)];
      const int q = phi[static_cast<std::size_t>(j)];
      total += graph(i, j) * model.theta(p, q) - model.log_partition(p, q);
    }
  }
  if (features.log_density)
    for (Index v : seeds.nonseeds()) total += (*features.log_density)(phi[static_cast<std::size_t>(v)], v);
  return total;
}

double swap_log_ratio(const Graph& graph, const EdgeModel& model, const SeedSet& seeds, std::span<const int> phi,
                      Index i, Index j, LikelihoodMode mode, FeatureLikelihood features) {
  const int k = static_cast<int>(model.num_blocks());
  check_model(model, k);
  check_labels(seeds, phi, k);
  check_features(features, k, graph.size());
  if (i < 0 || j < 0 || i >= graph.size() || j >= graph.size()) throw std::invalid_argument("vertex out of range");
  if (seeds.is_seed(i) || seeds.is_seed(j)) throw std::invalid_argument("swap endpoints must be nonseeds");
  const int p = phi[static_cast<std::size_t>(i)];
  const int q = phi[static_cast<std::size_t>(j)];
  if (p == q) throw std::invalid_argument("swap endpoints must carry different labels");

  // Both endpoints see the same partner set, so the log-partition terms cancel
  // and the {i, j} pair term is unchanged.
  double delta = 0.0;
  for (Index v = 0; v < graph.size(); ++v) {
    if (v == i || v == j) continue;
    if (mode == LikelihoodMode::kRestricted && !seeds.is_seed(v)) continue;
    const int c = phi[static_cast<std::size_t>(v)];
    delta += (graph(i, v) - graph(j, v)) * (model.theta(q, c) - model.theta(p, c));
  }
  if (features.log_density) {
    const Matrix& f = *features.log_density;
    delta += f(q, i) - f(p, i) + f(p, j) - f(q, j);
  }
  return delta;
}

SwapScores eta_xi_scores(const Graph& graph, const EdgeModel& model, const SeedSet& seeds, std::span<const int> phi,
                         LikelihoodMode mode, FeatureLikelihood features) {
  const int k = static_cast<int>(model.num_blocks());
  check_model(model, k);
  check_labels(seeds, phi, k);
  check_features(features, k, graph.size());
  const Index n = graph.size();
  const std::vector<Index>& nonseeds = seeds.nonseeds();
  const Index u = static_cast<Index>(nonseeds.size());

  SwapScores out;
  out.log_score.assign(static_cast<std::size_t>(u), 0.0);
  std::vector<Index> zero, other;
  for (Index v : nonseeds) (phi[static_cast<std::size_t>(v)] == 0 ? zero : other).push_back(v);
  if (zero.empty() || other.empty()) {
    out.degenerate = true;
    return out;
  }

  // nbr(v, c): weight from v to counted partners labelled c.
  Matrix z = Matrix::Zero(n, k);
  for (Index v = 0; v < n; ++v)
    if (mode == LikelihoodMode::kFull || seeds.is_seed(v)) z(v, phi[static_cast<std::size_t>(v)]) = 1.0;
  const Matrix nbr = graph.adjacency() * z;
  const bool full = mode == LikelihoodMode::kFull;
  const Matrix& th = model.theta;
  const Matrix* f = features.log_density;

  auto delta = [&](Index i, Index j) {
    const int p = phi[static_cast<std::size_t>(i)];
    const int q = phi[static_cast<std::size_t>(j)];
    double d = (nbr.row(i) - nbr.row(j)).dot(th.row(q) - th.row(p));
    if (full) {
      // nbr(i) counted j under label q and nbr(j) counted i under label p.
      const double a = graph(i, j);
      d -= a * (th(q, q) - th(p, q));
      d += a * (th(q, p) - th(p, p));
    }
    if (f) d += (*f)(q, i) - (*f)(p, i) + (*f)(p, j) - (*f)(q, j);
    return d;
  };

  for (Index i : zero) {
    double s = 0.0;
    for (Index j : other) s += delta(i, j);
    out.log_score[static_cast<std::size_t>(seeds.nonseed_position(i))] = s / static_cast<double>(other.size());
  }
  for (Index i : other) {
    double s = 0.0;
    for (Index j : zero) s += delta(i, j);
    out.log_score[static_cast<std::size_t>(seeds.nonseed_position(i))] = s / static_cast<double>(zero.size());
  }
  return out;
}

}  // namespace vnom
