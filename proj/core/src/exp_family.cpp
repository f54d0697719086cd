#include "vnom/exp_family.hpp"

#include <cmath>
#include <stdexcept>

namespace vnom {

namespace {

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double BernoulliEdges::log_partition(double theta) const { return softplus(theta); }
double BernoulliEdges::mean_sufficient(double theta) const { return sigmoid(theta); }
double BernoulliEdges::var_sufficient(double theta) const {
  const double p = sigmoid(theta);
  return p * (1.0 - p);
}
bool BernoulliEdges::in_domain(double theta) const { return std::isfinite(theta); }
double BernoulliEdges::sample(double theta, Rng& rng) const {
  std::bernoulli_distribution draw(sigmoid(theta));
  return draw(rng) ? 1.0 : 0.0;
}

BinomialEdges::BinomialEdges(int trials) : trials_(trials) {
  if (trials < 1) throw std::invalid_argument("binomial family needs at least one trial");
}
double BinomialEdges::log_partition(double theta) const { return trials_ * softplus(theta); }
double BinomialEdges::mean_sufficient(double theta) const { return trials_ * sigmoid(theta); }
double BinomialEdges::var_sufficient(double theta) const {
  const double p = sigmoid(theta);
  return trials_ * p * (1.0 - p);
}
bool BinomialEdges::in_domain(double theta) const { return std::isfinite(theta); }
double BinomialEdges::sample(double theta, Rng& rng) const {
  std::binomial_distribution<int> draw(trials_, sigmoid(theta));
  return static_cast<double>(draw(rng));
}

Graph sample_exp_sbm(const ExpFamilyModel& model, const BlockAssignment& assignment, Rng& rng) {
  if (!model.family) throw std::invalid_argument("exponential family model has no edge distribution");
  const Index k = static_cast<Index>(model.block_sizes.size());
  if (model.theta.rows() != k || model.theta.cols() != k)
    throw std::invalid_argument("theta must be K x K");
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      if (model.theta(i, j) != model.theta(j, i)) throw std::invalid_argument("theta must be symmetric");
      if (!model.family->in_domain(model.theta(i, j)))
        throw std::invalid_argument("theta outside the natural parameter domain");
    }
  if (assignment.num_blocks() != k || assignment.block_sizes() != model.block_sizes)
    throw std::invalid_argument("assignment does not match the model block sizes");

  const Index n = assignment.size();
  Matrix adj = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double x = model.family->sample(model.theta(assignment[i], assignment[j]), rng);
      adj(i, j) = x;
      adj(j, i) = x;
    }
  }
  return Graph::from_adjacency(std::move(adj), true);
}

Graph sufficient_transform(const Graph& graph, const EdgeDistribution& family) {
  const Index n = graph.size();
  Matrix t = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) t(i, j) = family.sufficient(graph(i, j));
  return Graph::from_adjacency(std::move(t), true);
}

EdgeModel EdgeModel::bernoulli(const Matrix& lambda, double clamp_eps) {
  EdgeModel m;
  m.theta = logit_matrix(lambda, clamp_eps);
  m.log_partition.resize(lambda.rows(), lambda.cols());
  for (Index j = 0; j < lambda.cols(); ++j)
    for (Index i = 0; i < lambda.rows(); ++i)
      m.log_partition(i, j) = softplus(m.theta(i, j));
  return m;
}

EdgeModel EdgeModel::from_family(const Matrix& theta, const EdgeDistribution& family) {
  EdgeModel m;
  m.theta = theta;
  m.log_partition.resize(theta.rows(), theta.cols());
  for (Index j = 0; j < theta.cols(); ++j)
    for (Index i = 0; i < theta.rows(); ++i) {
      if (!family.in_domain(theta(i, j))) throw std::invalid_argument("theta outside the natural parameter domain");
      m.log_partition(i, j) = family.log_partition(theta(i, j));
    }
  return m;
}

}  // namespace vnom
