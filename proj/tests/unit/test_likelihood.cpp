#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "vnom/likelihood.hpp"
#include "vnom/sbm.hpp"

namespace vnom {
namespace {

struct Instance {
  Graph graph;
  Matrix lambda;
  SeedSet seeds;
  std::vector<int> phi;
};

// n vertices in K blocks with random labels, the first m (by a shuffle) seeded.
Instance random_instance(Index n, int k, Index m, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  Matrix lambda(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) lambda(a, b) = lambda(b, a) = unif(rng);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = static_cast<int>(v % k);
  std::shuffle(labels.begin(), labels.end(), rng);
  const BlockAssignment b(labels, k);
  Graph g(n);
  std::bernoulli_distribution coin(0.5);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (coin(rng)) g.set_edge(i, j);
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(static_cast<std::size_t>(m));
  return {g, lambda, SeedSet::from_assignment(order, b), labels};
}

double direct_log_likelihood(const Instance& in, const std::vector<int>& phi, bool restricted) {
  const Index n = in.graph.size();
  double v = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const bool si = in.seeds.is_seed(i), sj = in.seeds.is_seed(j);
      if (si && sj) continue;
      if (restricted && !si && !sj) continue;
      const double p = in.lambda(phi[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)]);
      v += in.graph(i, j) > 0 ? std::log(p) : std::log(1.0 - p);
    }
  }
  return v;
}

std::vector<int> swapped(std::vector<int> phi, Index i, Index j) {
  std::swap(phi[static_cast<std::size_t>(i)], phi[static_cast<std::size_t>(j)]);
  return phi;
}

TEST(LogLikelihood, ClosedFormsOnEmptyAndCompleteGraphs) {
  const std::vector<int> labels{0, 0, 0, 1, 1, 1, 1};
  const BlockAssignment b(labels, 2);
  const SeedSet seeds = SeedSet::from_assignment({0, 3}, b);
  const Index m = 2, u = 5;
  const double pairs = static_cast<double>(u * (u - 1) / 2 + m * u);
  const Graph empty(7);
  EXPECT_NEAR(log_likelihood(empty, EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.5)), seeds, labels),
              pairs * std::log(0.5), 1e-12);
  EXPECT_NEAR(log_likelihood(empty, EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.5)), seeds, labels,
                             LikelihoodMode::kRestricted),
              static_cast<double>(m * u) * std::log(0.5), 1e-12);
  Graph complete(7);
  for (Index i = 0; i < 7; ++i) {
    for (Index j = i + 1; j < 7; ++j) complete.set_edge(i, j);
  }
  EXPECT_NEAR(log_likelihood(complete, EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.3)), seeds, labels),
              pairs * std::log(0.3), 1e-12);
}

TEST(LogLikelihood, NoSeedsRestrictedIsZero) {
  const std::vector<int> labels{0, 1, 0, 1};
  const BlockAssignment b(labels, 2);
  const SeedSet seeds = SeedSet::from_assignment({}, b);
  Graph g(4);
  g.set_edge(0, 1);
  EXPECT_EQ(log_likelihood(g, EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.4)), seeds, labels,
                           LikelihoodMode::kRestricted),
            0.0);
}

TEST(LogLikelihood, MatchesDirectFormula) {
  Rng rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const Instance in = random_instance(12, 3, 4, rng);
    const EdgeModel em = EdgeModel::bernoulli(in.lambda);
    EXPECT_NEAR(log_likelihood(in.graph, em, in.seeds, in.phi), direct_log_likelihood(in, in.phi, false), 1e-10);
    EXPECT_NEAR(log_likelihood(in.graph, em, in.seeds, in.phi, LikelihoodMode::kRestricted),
                direct_log_likelihood(in, in.phi, true), 1e-10);
  }
}

TEST(LogLikelihood, BlockRelabelInvariance) {
  Rng rng(2);
  for (int rep = 0; rep < 30; ++rep) {
    const Instance in = random_instance(10, 3, 3, rng);
    const std::vector<int> pi{2, 0, 1};
    Matrix lambda_pi(3, 3);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) lambda_pi(pi[static_cast<std::size_t>(a)], pi[static_cast<std::size_t>(b)]) = in.lambda(a, b);
    }
    std::vector<int> phi_pi(in.phi.size());
    for (std::size_t v = 0; v < phi_pi.size(); ++v) phi_pi[v] = pi[static_cast<std::size_t>(in.phi[v])];
    const BlockAssignment relabelled(phi_pi, 3);
    const SeedSet seeds_pi = SeedSet::from_assignment(in.seeds.seeds(), relabelled);
    EXPECT_NEAR(log_likelihood(in.graph, EdgeModel::bernoulli(lambda_pi), seeds_pi, phi_pi),
                log_likelihood(in.graph, EdgeModel::bernoulli(in.lambda), in.seeds, in.phi), 1e-10);
  }
}

TEST(LogLikelihood, RejectsInfeasibleLabelings) {
  const std::vector<int> labels{0, 0, 1, 1};
  const BlockAssignment b(labels, 2);
  const SeedSet seeds = SeedSet::from_assignment({0}, b);
  const EdgeModel em = EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.4));
  const Graph g(4);
  const std::vector<int> bad_seed{1, 0, 1, 0};
  EXPECT_THROW(log_likelihood(g, em, seeds, bad_seed), std::invalid_argument);
  const std::vector<int> out_of_range{0, 0, 2, 1};
  EXPECT_THROW(log_likelihood(g, em, seeds, out_of_range), std::invalid_argument);
  const std::vector<Index> sizes{2, 2};
  const std::vector<int> wrong_sizes{0, 0, 0, 1};
  EXPECT_THROW(check_feasible(seeds, wrong_sizes, sizes, 2), std::invalid_argument);
  EXPECT_NO_THROW(check_feasible(seeds, labels, sizes, 2));
}

TEST(SwapLogRatio, MatchesFullRecompute) {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const Instance in = random_instance(8, 2 + rep % 2, 3, rng);
    const EdgeModel em = EdgeModel::bernoulli(in.lambda);
    const auto& ns = in.seeds.nonseeds();
    for (std::size_t a = 0; a < ns.size(); ++a) {
      for (std::size_t c = a + 1; c < ns.size(); ++c) {
        const Index i = ns[a], j = ns[c];
        if (in.phi[static_cast<std::size_t>(i)] == in.phi[static_cast<std::size_t>(j)]) continue;
        const auto sw = swapped(in.phi, i, j);
        for (LikelihoodMode mode : {LikelihoodMode::kFull, LikelihoodMode::kRestricted}) {
          EXPECT_NEAR(swap_log_ratio(in.graph, em, in.seeds, in.phi, i, j, mode),
                      log_likelihood(in.graph, em, in.seeds, sw, mode) -
                          log_likelihood(in.graph, em, in.seeds, in.phi, mode),
                      1e-9);
        }
      }
    }
  }
}

TEST(SwapLogRatio, WithFeaturesMatchesFullRecompute) {
  Rng rng(4);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 50; ++rep) {
    const Instance in = random_instance(9, 3, 3, rng);
    const EdgeModel em = EdgeModel::bernoulli(in.lambda);
    Matrix dens(3, 9);
    for (Index r = 0; r < 3; ++r) {
      for (Index c = 0; c < 9; ++c) dens(r, c) = gauss(rng);
    }
    const FeatureLikelihood fl{&dens};
    const auto& ns = in.seeds.nonseeds();
    for (std::size_t a = 0; a < ns.size(); ++a) {
      for (std::size_t c = a + 1; c < ns.size(); ++c) {
        const Index i = ns[a], j = ns[c];
        if (in.phi[static_cast<std::size_t>(i)] == in.phi[static_cast<std::size_t>(j)]) continue;
        const auto sw = swapped(in.phi, i, j);
        EXPECT_NEAR(swap_log_ratio(in.graph, em, in.seeds, in.phi, i, j, LikelihoodMode::kFull, fl),
                    log_likelihood(in.graph, em, in.seeds, sw, LikelihoodMode::kFull, fl) -
                        log_likelihood(in.graph, em, in.seeds, in.phi, LikelihoodMode::kFull, fl),
                    1e-9);
      }
    }
  }
}

TEST(SwapLogRatio, ZeroCases) {
  Rng rng(5);
  const Instance in = random_instance(10, 2, 3, rng);
  const EdgeModel flat = EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.37));
  const auto& ns = in.seeds.nonseeds();
  Index i = -1, j = -1;
  for (Index a : ns) {
    for (Index c : ns) {
      if (in.phi[static_cast<std::size_t>(a)] == 0 && in.phi[static_cast<std::size_t>(c)] == 1) i = a, j = c;
    }
  }
  ASSERT_GE(i, 0);
  EXPECT_NEAR(swap_log_ratio(in.graph, flat, in.seeds, in.phi, i, j), 0.0, 1e-12);

  // Rows i and j agree off {i, j}.
  Graph twin = in.graph;
  for (Index v = 0; v < twin.size(); ++v) {
    if (v != i && v != j) twin.set_edge(j, v, twin(i, v));
  }
  EXPECT_NEAR(swap_log_ratio(twin, EdgeModel::bernoulli(in.lambda), in.seeds, in.phi, i, j), 0.0, 1e-12);
}

TEST(SwapLogRatio, RejectsSeedsAndEqualLabels) {
  const std::vector<int> labels{0, 0, 1, 1, 0};
  const BlockAssignment b(labels, 2);
  const SeedSet seeds = SeedSet::from_assignment({0}, b);
  const EdgeModel em = EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.4));
  const Graph g(5);
  EXPECT_THROW(swap_log_ratio(g, em, seeds, labels, 0, 2), std::invalid_argument);
  EXPECT_THROW(swap_log_ratio(g, em, seeds, labels, 1, 4), std::invalid_argument);
}

TEST(EtaXiScores, MatchesProductOfRatios) {
  Rng rng(6);
  for (int rep = 0; rep < 50; ++rep) {
    const Instance in = random_instance(8, 2 + rep % 2, 2, rng);
    const EdgeModel em = EdgeModel::bernoulli(in.lambda);
    const SwapScores s = eta_xi_scores(in.graph, em, in.seeds, in.phi);
    const auto& ns = in.seeds.nonseeds();
    const double base = std::exp(log_likelihood(in.graph, em, in.seeds, in.phi));
    bool any_zero = false, any_other = false;
    for (Index v : ns) (in.phi[static_cast<std::size_t>(v)] == 0 ? any_zero : any_other) = true;
    if (!any_zero || !any_other) {
      EXPECT_TRUE(s.degenerate);
      continue;
    }
    EXPECT_FALSE(s.degenerate);
    for (std::size_t a = 0; a < ns.size(); ++a) {
      const bool zero = in.phi[static_cast<std::size_t>(ns[a])] == 0;
      double product = 1.0;
      int count = 0;
      for (std::size_t c = 0; c < ns.size(); ++c) {
        if ((in.phi[static_cast<std::size_t>(ns[c])] == 0) == zero) continue;
        product *= std::exp(log_likelihood(in.graph, em, in.seeds, swapped(in.phi, ns[a], ns[c]))) / base;
        ++count;
      }
      EXPECT_NEAR(std::exp(s.log_score[a]), std::pow(product, 1.0 / count), 1e-9 * std::pow(product, 1.0 / count));
    }
  }
}

TEST(EtaXiScores, ConstantModelAndDegenerateLabelings) {
  Rng rng(7);
  const Instance in = random_instance(10, 2, 3, rng);
  const SwapScores flat = eta_xi_scores(in.graph, EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.6)), in.seeds, in.phi);
  for (double x : flat.log_score) EXPECT_NEAR(x, 0.0, 1e-12);

  const std::vector<int> labels{0, 0, 0, 0, 1};
  const BlockAssignment b(labels, 2);
  const SeedSet seeds = SeedSet::from_assignment({4}, b);
  const SwapScores deg = eta_xi_scores(Graph(5), EdgeModel::bernoulli(Matrix::Constant(2, 2, 0.4)), seeds, labels);
  EXPECT_TRUE(deg.degenerate);
  for (double x : deg.log_score) EXPECT_EQ(x, 0.0);
}

}  // namespace
}  // namespace vnom
