#include "vnom/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vnom/assignment.hpp"

namespace vnom {

namespace {

bool is_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < j; ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

Permutation identity_permutation(Index u) {
  Permutation p(static_cast<std::size_t>(u));
  std::iota(p.begin(), p.end(), Index{0});
  return p;
}

double inner(const Matrix& x, const Matrix& y) { return x.cwiseProduct(y).sum(); }

}  // namespace

MatchingProblem::MatchingProblem(Matrix a, Matrix b, Index seed_count)
    : a_(std::move(a)), b_(std::move(b)), m_(seed_count) {
  init();
}

MatchingProblem::MatchingProblem(Matrix a, BlockPattern pattern, Index seed_count)
    : a_(std::move(a)), m_(seed_count) {
  const Index n = a_.rows();
  if (static_cast<Index>(pattern.labels.size()) != n)
    throw std::invalid_argument("pattern needs one label per vertex");
  if (!is_symmetric(pattern.values)) throw std::invalid_argument("pattern values must be symmetric");
  for (int l : pattern.labels)
    if (l < 0 || l >= pattern.values.rows()) throw std::invalid_argument("pattern label out of range");
  b_.resize(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      b_(i, j) = pattern.values(pattern.labels[static_cast<std::size_t>(i)],
                                pattern.labels[static_cast<std::size_t>(j)]);
  pattern_ = std::move(pattern);
  init();
}

void MatchingProblem::init() {
  const Index n = a_.rows();
  if (a_.cols() != n || b_.rows() != n || b_.cols() != n)
    throw std::invalid_argument("A and B must be square and of equal size");
  if (m_ < 0 || m_ > n) throw std::invalid_argument("seed count out of range");
  if (!is_symmetric(a_) || !is_symmetric(b_)) throw std::invalid_argument("A and B must be symmetric");
  if (!a_.allFinite() || !b_.allFinite()) throw std::invalid_argument("A and B must be finite");
  for (Index i = 0; i < n; ++i)
    if (a_(i, i) != 0.0) throw std::invalid_argument("A must have a zero diagonal");

  const Index u = n - m_;
  a22_ = a_.bottomRightCorner(u, u);
  b22_ = b_.bottomRightCorner(u, u);
  linear_ = Matrix::Zero(u, u);
  if (pattern_) {
    nonseed_labels_.assign(pattern_->labels.begin() + m_, pattern_->labels.end());
    pattern_values_ = pattern_->values;
    block_structured_ = true;
    // A12^T B12 = (A12^T Z_S V) expanded by position label.
    Matrix zs = Matrix::Zero(m_, pattern_values_.rows());
    for (Index s = 0; s < m_; ++s) zs(s, pattern_->labels[static_cast<std::size_t>(s)]) = 1.0;
    const Matrix y = a_.topRightCorner(m_, u).transpose() * (zs * pattern_values_);
    seed_term_.resize(u, u);
    for (Index j = 0; j < u; ++j) seed_term_.col(j) = y.col(nonseed_labels_[static_cast<std::size_t>(j)]);
  } else {
    seed_term_ = a_.topRightCorner(m_, u).transpose() * b_.topRightCorner(m_, u);
  }
  total_linear_ = seed_term_;
}

bool MatchingProblem::constant_within_blocks(const Matrix& m) const {
  if (!pattern_) return false;
  std::vector<Index> first(static_cast<std::size_t>(pattern_values_.rows()), -1);
  for (Index j = 0; j < m.cols(); ++j) {
    Index& f = first[static_cast<std::size_t>(nonseed_labels_[static_cast<std::size_t>(j)])];
    if (f < 0) {
      f = j;
    } else if (m.col(j) != m.col(f)) {
      return false;
    }
  }
  return true;
}

void MatchingProblem::set_linear_term(Matrix linear, double weight) {
  const Index u = nonseed_count();
  if (linear.rows() != u || linear.cols() != u) throw std::invalid_argument("linear term must be u x u");
  if (!linear.allFinite()) throw std::invalid_argument("linear term must be finite");
  if (!(weight >= 0.0)) throw std::invalid_argument("linear term weight must be non-negative");
  block_structured_ = constant_within_blocks(linear);
  linear_ = std::move(linear);
  weight_ = weight;
  total_linear_ = seed_term_ + weight_ * linear_;
}

Matrix MatchingProblem::quadratic_product(const Matrix& d) const {
  const Index u = nonseed_count();
  if (!pattern_) return a22_ * d * b22_;
  // B22 = Z V Z^T with Z the position-label indicator: A D B = (A (D Z) V) Z^T.
  const Index k = pattern_values_.rows();
  Matrix dz = Matrix::Zero(u, k);
  for (Index j = 0; j < u; ++j) dz.col(nonseed_labels_[static_cast<std::size_t>(j)]) += d.col(j);
  const Matrix y = (a22_ * dz) * pattern_values_;
  Matrix out(u, u);
  for (Index j = 0; j < u; ++j) out.col(j) = y.col(nonseed_labels_[static_cast<std::size_t>(j)]);
  return out;
}

double sgm_objective(const MatchingProblem& problem, const Permutation& perm) {
  const Index u = problem.nonseed_count();
  if (static_cast<Index>(perm.size()) != u || !is_permutation(perm))
    throw std::invalid_argument("sgm_objective: perm must be a bijection on the nonseeds");
  const Matrix& a = problem.a22();
  const Matrix& b = problem.b22();
  double quad = 0.0;
  for (Index j = 0; j < u; ++j) {
    const Index pj = perm[static_cast<std::size_t>(j)];
    for (Index i = 0; i < u; ++i) {
      if (i == j) continue;
      quad += a(i, j) * b(perm[static_cast<std::size_t>(i)], pj);
    }
  }
  return -0.5 * quad - assignment_cost(problem.total_linear(), perm);
}

double restricted_objective(const MatchingProblem& problem, const Permutation& perm) {
  if (static_cast<Index>(perm.size()) != problem.nonseed_count() || !is_permutation(perm))
    throw std::invalid_argument("restricted_objective: perm must be a bijection on the nonseeds");
  return -assignment_cost(problem.seed_term(), perm);
}

Matrix random_doubly_stochastic(Index u, Rng& rng) {
  Matrix d = Matrix::Zero(u, u);
  const Index count = std::min<Index>(u, 10);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(count));
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  Permutation p = identity_permutation(u);
  for (Index r = 0; r < count; ++r) {
    std::shuffle(p.begin(), p.end(), rng);
    const double weight = w[static_cast<std::size_t>(r)] / total;
    for (Index i = 0; i < u; ++i) d(i, p[static_cast<std::size_t>(i)]) += weight;
  }
  return d;
}

namespace {

struct RestartOutcome {
  Permutation perm;
  double objective = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

// Permutation minimizing <grad, P>.
Permutation linear_minimizer(const MatchingProblem& problem, const Matrix& grad) {
  if (!problem.block_structured()) return solve_lap(grad).perm;
  const std::vector<int>& labels = problem.position_labels();
  const Index k = problem.pattern()->values.rows();
  std::vector<std::vector<Index>> positions(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < labels.size(); ++j) positions[static_cast<std::size_t>(labels[j])].push_back(static_cast<Index>(j));
  Matrix cost = Matrix::Zero(grad.rows(), k);
  std::vector<Index> capacity(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) {
    const auto& pos = positions[static_cast<std::size_t>(c)];
    capacity[static_cast<std::size_t>(c)] = static_cast<Index>(pos.size());
    if (!pos.empty()) cost.col(c) = grad.col(pos.front());
  }
  const std::vector<int> cls = solve_capacitated_assignment(cost, capacity);
  std::vector<std::size_t> next(static_cast<std::size_t>(k), 0);
  Permutation perm(cls.size());
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const auto c = static_cast<std::size_t>(cls[i]);
    perm[i] = positions[c][next[c]++];
  }
  return perm;
}

RestartOutcome run_frank_wolfe(const MatchingProblem& problem, Matrix d, const FwOptions& opts) {
  const Matrix& lin = problem.total_linear();
  Matrix g = problem.quadratic_product(d);  // A22 D B22
  auto relaxed = [&](const Matrix& gd, const Matrix& dd) { return -0.5 * inner(gd, dd) - inner(lin, dd); };

  RestartOutcome out;
  // Best vertex of the polytope visited by the linear subproblems.
  Permutation best_vertex;
  double best_vertex_obj = std::numeric_limits<double>::infinity();
  double h = relaxed(g, d);
  out.trace.push_back(h);
  for (int it = 0; it < opts.max_iters; ++it) {
    const Matrix grad = -g - lin;
    const Permutation q = linear_minimizer(problem, grad);
    if (const double f = sgm_objective(problem, q); f < best_vertex_obj) {
      best_vertex_obj = f;
      best_vertex = q;
    }
    Matrix delta = -d;
    for (std::size_t i = 0; i < q.size(); ++i) delta(static_cast<Index>(i), q[i]) += 1.0;

    // h(D + x delta) = h(D) + lin_coef x + quad_coef x^2.
    const double lin_coef = inner(grad, delta);
    const Matrix g_delta = problem.quadratic_product(delta);
    const double quad_coef = -0.5 * inner(g_delta, delta);
    double step;
    if (quad_coef > 0.0) {
      step = std::clamp(-lin_coef / (2.0 * quad_coef), 0.0, 1.0);
    } else {
      step = quad_coef + lin_coef <= 0.0 ? 1.0 : 0.0;
    }

    if (step > 0.0) {
      d += step * delta;
      g += step * g_delta;
    }
    const double h_new = relaxed(g, d);
    out.trace.push_back(h_new);
    const double change = std::abs(h_new - h);
    h = h_new;
    if (step == 0.0 || change <= opts.tol * std::abs(h)) {
      out.converged = true;
      break;
    }
  }

  out.perm = solve_lap(-d).perm;
  out.objective = sgm_objective(problem, out.perm);
  if (best_vertex_obj < out.objective) {
    out.perm = std::move(best_vertex);
    out.objective = best_vertex_obj;
  }
  return out;
}

}  // namespace

MatchingResult solve_sgm_fw(const MatchingProblem& problem, const FwOptions& opts, Rng& rng) {
  if (opts.max_iters < 0 || opts.restarts < 1 || !(opts.tol >= 0.0))
    throw std::invalid_argument("invalid Frank-Wolfe options");
  const Index u = problem.nonseed_count();
  MatchingResult result;
  if (u <= 1) {
    result.perm = identity_permutation(u);
    result.objective = sgm_objective(problem, result.perm);
    result.restarts_used = 1;
    result.traces.push_back({result.objective});
    return result;
  }

  for (int r = 0; r < opts.restarts; ++r) {
    Matrix start;
    const FwInit init = r == 0 ? opts.init : FwInit::kRandom;
    switch (init) {
      case FwInit::kBarycenter: start = Matrix::Constant(u, u, 1.0 / static_cast<double>(u)); break;
      case FwInit::kIdentity: start = Matrix::Identity(u, u); break;
      case FwInit::kRandom: start = random_doubly_stochastic(u, rng); break;
    }
    RestartOutcome o = run_frank_wolfe(problem, std::move(start), opts);
    if (r == 0 || o.objective < result.objective) {
      result.perm = o.perm;
      result.objective = o.objective;
      result.best_restart = r;
      result.converged = o.converged;
    }
    result.traces.push_back(std::move(o.trace));
  }
  result.restarts_used = opts.restarts;
  return result;
}

MatchingResult solve_restricted(const MatchingProblem& problem) {
  const Index u = problem.nonseed_count();
  MatchingResult result;
  result.restarts_used = 1;
  const Matrix& c = problem.seed_term();
  if (problem.seed_count() == 0 || c.isZero(0.0)) {
    result.perm = identity_permutation(u);
    result.degenerate = true;
  } else {
    result.perm = solve_lap(-c).perm;
  }
  result.objective = restricted_objective(problem, result.perm);
  result.traces.push_back({result.objective});
  return result;
}

namespace {

template <typename Objective>
MatchingResult exhaustive(const MatchingProblem& problem, Objective objective) {
  const Index u = problem.nonseed_count();
  if (u > kBruteForceSgmLimit) throw std::invalid_argument("brute force: too many nonseeds");
  Permutation perm = identity_permutation(u);
  MatchingResult best;
  best.perm = perm;
  best.objective = objective(problem, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double v = objective(problem, perm);
    if (v < best.objective) {
      best.objective = v;
      best.perm = perm;
    }
  }
  best.restarts_used = 1;
  return best;
}

}  // namespace

MatchingResult brute_force_sgm(const MatchingProblem& problem) {
  return exhaustive(problem, [](const MatchingProblem& p, const Permutation& perm) { return sgm_objective(p, perm); });
}

MatchingResult brute_force_restricted(const MatchingProblem& problem) {
  return exhaustive(problem,
                    [](const MatchingProblem& p, const Permutation& perm) { return restricted_objective(p, perm); });
}

BlockConfusion block_confusion(const Permutation& perm, std::span<const int> true_labels,
                               std::span<const int> position_labels, int num_blocks) {
  if (perm.size() != true_labels.size() || perm.size() != position_labels.size() || !is_permutation(perm))
    throw std::invalid_argument("block_confusion: size mismatch");
  BlockConfusion out;
  out.eps = Eigen::MatrixXi::Zero(num_blocks, num_blocks);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const int k = true_labels[i];
    const int l = position_labels[static_cast<std::size_t>(perm[i])];
    if (k < 0 || k >= num_blocks || l < 0 || l >= num_blocks)
      throw std::invalid_argument("block_confusion: label out of range");
    ++out.eps(k, l);
  }
  out.eps_out.resize(static_cast<std::size_t>(num_blocks));
  for (int k = 0; k < num_blocks; ++k) out.eps_out[static_cast<std::size_t>(k)] = out.eps.row(k).sum() - out.eps(k, k);
  return out;
}

BlockConfusion block_confusion(const Permutation& perm, std::span<const int> true_labels,
                               std::span<const Index> pattern_block_sizes) {
  std::vector<int> positions;
  for (std::size_t k = 0; k < pattern_block_sizes.size(); ++k)
    positions.insert(positions.end(), static_cast<std::size_t>(pattern_block_sizes[k]), static_cast<int>(k));
  if (positions.size() != perm.size()) throw std::invalid_argument("block_confusion: block sizes must sum to u");
  return block_confusion(perm, true_labels, positions, static_cast<int>(pattern_block_sizes.size()));
}

}  // namespace vnom
