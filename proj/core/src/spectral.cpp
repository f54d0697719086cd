#include "vnom/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace vnom {

Embedding adjacency_spectral_embed(const Graph& graph, Index d) {
  const Index n = graph.size();
  if (d < 1 || d > n) throw std::invalid_argument("embedding dimension must be in [1, n]");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(graph.adjacency());
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Vector& vals = eig.eigenvalues();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return std::abs(vals(a)) > std::abs(vals(b)); });

  Embedding out;
  out.coords.resize(n, d);
  for (Index c = 0; c < d; ++c) {
    const Index e = idx[static_cast<std::size_t>(c)];
    Vector col = eig.eigenvectors().col(e);
    Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    out.coords.col(c) = col * std::sqrt(std::abs(vals(e)));
    out.eigvals.push_back(vals(e));
  }
  return out;
}

Embedding project_to_sphere(const Embedding& embedding) {
  Embedding out = embedding;
  out.zero_rows.clear();
  for (Index r = 0; r < out.coords.rows(); ++r) {
    const double norm = out.coords.row(r).norm();
    if (norm > 0.0) {
      out.coords.row(r) /= norm;
    } else {
      out.zero_rows.push_back(r);
    }
  }
  return out;
}

namespace {

int nearest(const Matrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x, double& dist2) {
  int best = 0;
  dist2 = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double d2 = (centroids.row(c) - x).squaredNorm();
    if (d2 < dist2) {
      dist2 = d2;
      best = static_cast<int>(c);
    }
  }
  return best;
}

Matrix plus_plus_seeding(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], (points.row(i) - centroids.row(c - 1)).squaredNorm());
      total += d2[static_cast<std::size_t>(i)];
    }
    Index chosen;
    if (total > 0.0) {
      std::discrete_distribution<Index> draw(d2.begin(), d2.end());
      chosen = draw(rng);
    } else {
      chosen = pick(rng);
    }
    centroids.row(c) = points.row(chosen);
  }
  return centroids;
}

ClusterModel lloyd(const Matrix& points, Matrix centroids, int max_iters) {
  const Index n = points.rows();
  const int k = static_cast<int>(centroids.rows());
  ClusterModel out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = nearest(centroids, points.row(i), dist[static_cast<std::size_t>(i)]);
      changed = changed || c != out.labels[static_cast<std::size_t>(i)];
      out.labels[static_cast<std::size_t>(i)] = c;
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      // Move the point farthest from its centroid into the empty cluster,
      // taking it only from a cluster that keeps at least one member.
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        const int from = out.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(from)] < 2) continue;
        if (far < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
      }
      if (far < 0) break;
      --counts[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(far)])];
      out.labels[static_cast<std::size_t>(far)] = c;
      dist[static_cast<std::size_t>(far)] = 0.0;
      ++counts[static_cast<std::size_t>(c)];
      changed = true;
    }
    Matrix sums = Matrix::Zero(k, points.cols());
    for (Index i = 0; i < n; ++i) sums.row(out.labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0) centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) inertia += (points.row(i) - centroids.row(out.labels[static_cast<std::size_t>(i)])).squaredNorm();
    out.history.push_back(inertia);
    if (!changed) break;
  }
  out.centroids = std::move(centroids);
  out.inertia = out.history.empty() ? 0.0 : out.history.back();
  return out;
}

}  // namespace

ClusterModel kmeans(const Matrix& points, int k, const KMeansOptions& opts, Rng& rng) {
  if (k < 1 || k > points.rows()) throw std::invalid_argument("k must be in [1, number of points]");
  if (opts.restarts < 1 || opts.max_iters < 1) throw std::invalid_argument("invalid k-means options");
  ClusterModel best;
  for (int r = 0; r < opts.restarts; ++r) {
    ClusterModel m = lloyd(points, plus_plus_seeding(points, k, rng), opts.max_iters);
    if (r == 0 || m.inertia < best.inertia) best = std::move(m);
  }
  return best;
}

NominationList nominate_spectral(const Graph& graph, const SeedSet& seeds, int num_blocks, const SpectralOptions& opts,
                                 Rng& rng) {
  if (num_blocks < 2) throw std::invalid_argument("spectral nomination needs at least two blocks");
  Embedding emb = adjacency_spectral_embed(graph, num_blocks);
  if (opts.project) emb = project_to_sphere(emb);
  ClusterModel clusters = kmeans(emb.coords, num_blocks, opts.kmeans, rng);

  std::vector<Index> interest(static_cast<std::size_t>(num_blocks), 0), others(static_cast<std::size_t>(num_blocks), 0),
      size(static_cast<std::size_t>(num_blocks), 0);
  for (int l : clusters.labels) ++size[static_cast<std::size_t>(l)];
  bool have_interest_seed = false;
  for (std::size_t s = 0; s < seeds.seeds().size(); ++s) {
    const auto c = static_cast<std::size_t>(clusters.labels[static_cast<std::size_t>(seeds.seeds()[s])]);
    if (seeds.seed_labels()[s] == 0) {
      ++interest[c];
      have_interest_seed = true;
    } else {
      ++others[c];
    }
  }
  // Without an interesting seed, fall back to the cluster with the fewest
  // seeds from other blocks.
  auto better = [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
    if (have_interest_seed) {
      if (interest[ia] != interest[ib]) return interest[ia] > interest[ib];
    } else if (others[ia] != others[ib]) {
      return others[ia] < others[ib];
    }
    return size[ia] > size[ib];
  };
  int chosen = 0;
  for (int c = 1; c < num_blocks; ++c)
    if (better(c, chosen)) chosen = c;
  clusters.interest_cluster = chosen;

  const std::vector<Index>& nonseeds = seeds.nonseeds();
  std::vector<double> neg_dist(nonseeds.size());
  for (std::size_t p = 0; p < nonseeds.size(); ++p)
    neg_dist[p] = -(emb.coords.row(nonseeds[p]) - clusters.centroids.row(chosen)).norm();
  NominationList out = rank_descending(nonseeds, neg_dist, rng);
  for (std::size_t r = 0; r < out.order.size(); ++r) {
    out.scores[r] = -out.scores[r];
    out.labels[r] = clusters.labels[static_cast<std::size_t>(out.order[r])];
  }
  out.degenerate = !have_interest_seed;
  return out;
}

}  // namespace vnom
