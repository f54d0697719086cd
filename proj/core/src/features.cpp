#include "vnom/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vnom {

double FeatureDensities::log_pdf(Index block, const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double total = 0.0;
  for (Index d = 0; d < means.cols(); ++d) {
    const double var = variances(block, d);
    const double r = x(d) - means(block, d);
    total += -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * r * r / var;
  }
  return total;
}

FeatureDensities estimate_feature_densities(const FeatureSet& features, const SeedSet& seeds,
                                            double variance_floor) {
  const Index n = features.x.rows();
  const Index d = features.dim();
  const int k = seeds.num_blocks();
  if (d == 0) throw std::invalid_argument("features must have at least one dimension");
  if (n != seeds.num_vertices()) throw std::invalid_argument("need one feature row per vertex");
  if (!features.x.allFinite()) throw std::invalid_argument("features must be finite");
  if (!(variance_floor > 0.0)) throw std::invalid_argument("variance floor must be positive");
  if (seeds.total() == 0) throw std::invalid_argument("feature densities need at least one seed");

  auto fit = [&](auto&& include, Eigen::RowVectorXd& mean, Eigen::RowVectorXd& var) {
    mean = Eigen::RowVectorXd::Zero(d);
    Index count = 0;
    for (std::size_t s = 0; s < seeds.seeds().size(); ++s)
      if (include(s)) {
        mean += features.x.row(seeds.seeds()[s]);
        ++count;
      }
    mean /= static_cast<double>(count);
    var = Eigen::RowVectorXd::Zero(d);
    for (std::size_t s = 0; s < seeds.seeds().size(); ++s)
      if (include(s)) var += (features.x.row(seeds.seeds()[s]) - mean).array().square().matrix();
    var /= static_cast<double>(count);
    var = var.cwiseMax(variance_floor);
  };

  Eigen::RowVectorXd pooled_mean, pooled_var;
  fit([](std::size_t) { return true; }, pooled_mean, pooled_var);

  FeatureDensities out;
  out.means.resize(k, d);
  out.variances.resize(k, d);
  for (int b = 0; b < k; ++b) {
    Eigen::RowVectorXd mean = pooled_mean, var = pooled_var;
    if (seeds.per_block()[static_cast<std::size_t>(b)] > 0)
      fit([&](std::size_t s) { return seeds.seed_labels()[s] == b; }, mean, var);
    out.means.row(b) = mean;
    out.variances.row(b) = var;
  }

  out.log_density.resize(k, n);
  for (Index v = 0; v < n; ++v)
    for (int b = 0; b < k; ++b) out.log_density(b, v) = out.log_pdf(b, features.x.row(v));
  const std::vector<Index>& nonseeds = seeds.nonseeds();
  out.f.resize(k, static_cast<Index>(nonseeds.size()));
  for (std::size_t j = 0; j < nonseeds.size(); ++j)
    out.f.col(static_cast<Index>(j)) = out.log_density.col(nonseeds[j]).array().exp().matrix();
  return out;
}

}  // namespace vnom
