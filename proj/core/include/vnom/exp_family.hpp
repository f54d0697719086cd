#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vnom/sbm.hpp"
#include "vnom/types.hpp"

namespace vnom {

// One-parameter canonical exponential family h(x) exp(T(x) theta - A(theta))
// with bounded support. Implementations must be stateless.
class EdgeDistribution {
 public:
  virtual ~EdgeDistribution() = default;

  virtual std::string name() const = 0;
  virtual double sufficient(double x) const = 0;          // T(x)
  virtual double log_partition(double theta) const = 0;   // A(theta)
  virtual double mean_sufficient(double theta) const = 0; // A'(theta) = E T(X)
  virtual double var_sufficient(double theta) const = 0;  // A''(theta)
  virtual double support_min() const = 0;
  virtual double support_max() const = 0;
  virtual bool in_domain(double theta) const = 0;
  virtual double sample(double theta, Rng& rng) const = 0;
};

class BernoulliEdges final : public EdgeDistribution {
 public:
  std::string name() const override { return "bernoulli"; }
  double sufficient(double x) const override { return x; }
  double log_partition(double theta) const override;
  double mean_sufficient(double theta) const override;
  double var_sufficient(double theta) const override;
  double support_min() const override { return 0.0; }
  double support_max() const override { return 1.0; }
  bool in_domain(double theta) const override;
  double sample(double theta, Rng& rng) const override;
};

class BinomialEdges final : public EdgeDistribution {
 public:
  explicit BinomialEdges(int trials);

  std::string name() const override { return "binomial"; }
  int trials() const { return trials_; }
  double sufficient(double x) const override { return x; }
  double log_partition(double theta) const override;
  double mean_sufficient(double theta) const override;
  double var_sufficient(double theta) const override;
  double support_min() const override { return 0.0; }
  double support_max() const override { return trials_; }
  bool in_domain(double theta) const override;
  double sample(double theta, Rng& rng) const override;

 private:
  int trials_;
};

struct ExpFamilyModel {
  std::vector<Index> block_sizes;
  Matrix theta;
  std::shared_ptr<const EdgeDistribution> family;
};

// Weighted graph with A_ij drawn from the family at theta[b(i), b(j)].
Graph sample_exp_sbm(const ExpFamilyModel& model, const BlockAssignment& assignment, Rng& rng);

// Entrywise T(A_ij) off the diagonal; the matrix that gets matched against theta.
Graph sufficient_transform(const Graph& graph, const EdgeDistribution& family);

// Per block-pair natural parameter and log-partition. The log-likelihood of a
// labeling phi is sum over counted pairs of A_ij theta[phi_i, phi_j] -
// log_partition[phi_i, phi_j], up to a phi-independent base-measure term.
struct EdgeModel {
  Matrix theta;
  Matrix log_partition;

  Index num_blocks() const { return theta.rows(); }

  // theta = logit(Lambda), A(theta) = -log(1 - Lambda), after clamping.
  static EdgeModel bernoulli(const Matrix& lambda, double clamp_eps = kDefaultClamp);
  static EdgeModel from_family(const Matrix& theta, const EdgeDistribution& family);
};

}  // namespace vnom
