#pragma once

#include "vnom/sbm.hpp"
#include "vnom/types.hpp"

namespace vnom {

inline constexpr double kVarianceFloor = 1e-6;

// One row of X per vertex.
struct FeatureSet {
  Matrix x;
  Index dim() const { return x.cols(); }
};

// Diagonal-normal density estimates per block, from the seeds.
struct FeatureDensities {
  Matrix means;      // K x d
  Matrix variances;  // K x d, floored
  // log f_k(X_v) for every vertex v (K x n); F restricted to nonseeds is
  // exp of the nonseed columns.
  Matrix log_density;
  // F: K x u density values at the nonseed features, columns in
  // seeds.nonseeds() order.
  Matrix f;

  double log_pdf(Index block, const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

// Blocks with fewer than two seeds keep the variance floor; a block without
// seeds falls back to the pooled estimate over all seeds.
FeatureDensities estimate_feature_densities(const FeatureSet& features, const SeedSet& seeds,
                                            double variance_floor = kVarianceFloor);

}  // namespace vnom
