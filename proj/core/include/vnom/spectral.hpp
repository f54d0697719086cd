#pragma once

#include <vector>

#include "vnom/nomination.hpp"
#include "vnom/sbm.hpp"

namespace vnom {

struct Embedding {
  Matrix coords;                // n x d
  std::vector<double> eigvals;  // descending |eigval|
  // Rows left at zero by project_to_sphere.
  std::vector<Index> zero_rows;

  Index dim() const { return coords.cols(); }
};

// coords = U_d |S_d|^{1/2} for the d largest-magnitude eigenpairs; each
// column's largest-magnitude entry is made positive.
Embedding adjacency_spectral_embed(const Graph& graph, Index d);

Embedding project_to_sphere(const Embedding& embedding);

struct KMeansOptions {
  int restarts = 10;
  int max_iters = 100;
};

struct ClusterModel {
  Matrix centroids;          // K x d
  std::vector<int> labels;   // per row
  double inertia = 0.0;
  // Within-cluster sum of squares after each Lloyd iteration of the winning
  // restart.
  std::vector<double> history;
  int interest_cluster = 0;
};

// Lloyd iterations from k-means++ seeding, best of opts.restarts by inertia.
// An empty cluster is re-seeded at the point farthest from its centroid.
ClusterModel kmeans(const Matrix& points, int k, const KMeansOptions& opts, Rng& rng);

struct SpectralOptions {
  bool project = true;
  KMeansOptions kmeans;
};

// Embed at d = K, optionally project, cluster all vertices, pick the cluster
// holding the plurality of block-0 seeds (then larger cluster, then lower
// index) and rank nonseeds by distance to its centroid. scores are the
// distances; labels the clusters.
NominationList nominate_spectral(const Graph& graph, const SeedSet& seeds, int num_blocks,
                                 const SpectralOptions& opts, Rng& rng);

}  // namespace vnom
