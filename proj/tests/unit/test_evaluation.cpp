#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "vnom/evaluation.hpp"

namespace vnom {
namespace {

// A list over vertices 0..u-1 in the given order; vertices flagged in
// interesting are the block of interest. No seeds.
struct Case {
  NominationList list;
  TruthLabels truth;
};

Case make_case(const std::vector<Index>& order, const std::vector<bool>& interesting) {
  Case c;
  c.list.order = order;
  c.list.scores.assign(order.size(), 0.0);
  c.list.labels.assign(order.size(), -1);
  c.truth.interesting = interesting;
  c.truth.nonseed_interesting = std::count(interesting.begin(), interesting.end(), true);
  return c;
}

Case random_case(Index u, Rng& rng) {
  std::uniform_int_distribution<Index> pick(1, u);
  const Index u1 = pick(rng);
  std::vector<bool> interesting(static_cast<std::size_t>(u), false);
  for (Index i = 0; i < u1; ++i) interesting[static_cast<std::size_t>(i)] = true;
  std::vector<Index> order(static_cast<std::size_t>(u));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  return make_case(order, interesting);
}

double direct_ap(const Case& c) {
  const Index u1 = c.truth.nonseed_interesting;
  double sum = 0.0;
  Index hits = 0;
  for (Index i = 0; i < u1; ++i) {
    if (c.truth.interesting[static_cast<std::size_t>(c.list.order[static_cast<std::size_t>(i)])]) ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(u1);
}

TEST(AveragePrecision, WorkedExamples) {
  const Case c = make_case({0, 1, 2, 3}, {true, false, true, false});
  EXPECT_EQ(average_precision(c.list, c.truth), 0.75);
  EXPECT_EQ(average_precision_harmonic(c.list, c.truth), 0.75);
  const Case best = make_case({0, 1, 2, 3}, {true, true, false, false});
  EXPECT_EQ(average_precision(best.list, best.truth), 1.0);
  EXPECT_EQ(average_precision_harmonic(best.list, best.truth), 1.0);
  const Case worst = make_case({0, 1, 2, 3}, {false, false, true, true});
  EXPECT_EQ(average_precision(worst.list, worst.truth), 0.0);
  const Case none = make_case({0, 1}, {false, false});
  EXPECT_THROW(average_precision(none.list, none.truth), std::invalid_argument);
}

TEST(AveragePrecision, FormsAgreeExactlyAndMatchDirectSum) {
  Rng rng(1);
  for (int rep = 0; rep < 2000; ++rep) {
    const Case c = random_case(1 + rep % 50, rng);
    const double ap = average_precision(c.list, c.truth);
    EXPECT_EQ(ap, average_precision_harmonic(c.list, c.truth));
    EXPECT_NEAR(ap, direct_ap(c), 1e-12);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
  }
}

TEST(AveragePrecision, LargeListsFallBackConsistently) {
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Case c = random_case(400, rng);
    EXPECT_NEAR(average_precision(c.list, c.truth), average_precision_harmonic(c.list, c.truth), 1e-12);
    EXPECT_NEAR(average_precision(c.list, c.truth), direct_ap(c), 1e-12);
  }
}

TEST(AveragePrecision, MovingAHitUpNeverHurts) {
  Rng rng(3);
  for (int rep = 0; rep < 500; ++rep) {
    Case c = random_case(12, rng);
    std::vector<Index> hits;
    for (std::size_t r = 1; r < c.list.order.size(); ++r) {
      if (c.truth.interesting[static_cast<std::size_t>(c.list.order[r])] &&
          !c.truth.interesting[static_cast<std::size_t>(c.list.order[r - 1])])
        hits.push_back(static_cast<Index>(r));
    }
    if (hits.empty()) continue;
    const double before = average_precision(c.list, c.truth);
    const auto r = static_cast<std::size_t>(hits.front());
    std::swap(c.list.order[r], c.list.order[r - 1]);
    EXPECT_GE(average_precision(c.list, c.truth), before);
  }
}

double pair_count_ari(const std::vector<int>& x, const std::vector<int>& y) {
  // Agreement table over all unordered pairs, then the expected-index correction.
  const std::size_t n = x.size();
  double both = 0.0, in_x = 0.0, in_y = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sx = x[i] == x[j], sy = y[i] == y[j];
      both += sx && sy;
      in_x += sx;
      in_y += sy;
      pairs += 1.0;
    }
  }
  const double expected = in_x * in_y / pairs;
  return (both - expected) / (0.5 * (in_x + in_y) - expected);
}

TEST(AdjustedRandIndex, WorkedExamples) {
  const std::vector<int> truth{1, 1, 2, 2};
  const std::vector<int> pred{1, 2, 1, 2};
  EXPECT_NEAR(adjusted_rand_index(pred, truth), -0.5, 1e-15);
  EXPECT_EQ(adjusted_rand_index(truth, truth), 1.0);
  const std::vector<int> single{0, 0, 0, 0};
  EXPECT_EQ(adjusted_rand_index(single, truth), 0.0);
  EXPECT_EQ(adjusted_rand_index(single, single), 1.0);
  const std::vector<int> short_one{1, 2};
  EXPECT_THROW(adjusted_rand_index(short_one, truth), std::invalid_argument);
}

TEST(AdjustedRandIndex, OracleSymmetryAndRelabelling) {
  Rng rng(4);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<int> x(20), y(20);
    for (auto& v : x) v = lab(rng);
    for (auto& v : y) v = lab(rng);
    const double ari = adjusted_rand_index(x, y);
    EXPECT_NEAR(ari, pair_count_ari(x, y), 1e-12);
    EXPECT_NEAR(ari, adjusted_rand_index(y, x), 1e-15);
    std::vector<int> relabelled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) relabelled[i] = 7 * (3 - x[i]) + 5;
    EXPECT_NEAR(adjusted_rand_index(relabelled, y), ari, 1e-12);
    EXPECT_GE(ari, -0.5 - 1e-12);
    EXPECT_LE(ari, 1.0);
  }
}

TEST(MeanNominationCurve, PerfectListIsStep) {
  const Case c = make_case({2, 0, 1, 3}, {true, false, true, false});
  const std::vector<NominationList> lists{c.list, c.list};
  const MeanNominationCurve curve = mean_nomination_curve(lists, c.truth);
  EXPECT_EQ(curve.prob, (std::vector<double>{1.0, 1.0, 0.0, 0.0}));
  EXPECT_EQ(curve.stderr_, (std::vector<double>{0.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(curve.trials, 2);
}

TEST(MeanNominationCurve, SumsToInterestingCountAndFlatForChance) {
  Rng rng(5);
  const Index u = 10, u1 = 4;
  std::vector<std::vector<bool>> rows;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    std::vector<bool> row(static_cast<std::size_t>(u), false);
    for (Index i = 0; i < u1; ++i) row[static_cast<std::size_t>(i)] = true;
    std::shuffle(row.begin(), row.end(), rng);
    rows.push_back(row);
  }
  const MeanNominationCurve curve = mean_nomination_curve(rows);
  EXPECT_NEAR(std::accumulate(curve.prob.begin(), curve.prob.end(), 0.0), static_cast<double>(u1), 1e-9);
  for (std::size_t r = 0; r < curve.prob.size(); ++r) {
    EXPECT_NEAR(curve.prob[r], 0.4, 0.02);
    const double p = curve.prob[r];
    EXPECT_NEAR(curve.stderr_[r], std::sqrt(p * (1 - p) / (trials - 1)), 1e-12);
  }
}

TEST(MeanNominationCurve, RejectsRaggedInput) {
  EXPECT_THROW(mean_nomination_curve(std::vector<std::vector<bool>>{}), std::invalid_argument);
  EXPECT_THROW(mean_nomination_curve(std::vector<std::vector<bool>>{{true}, {true, false}}), std::invalid_argument);
}

TEST(TruthLabels, CountsInterestingNonseeds) {
  const std::vector<int> labels{0, 1, 0, 0, 2};
  const BlockAssignment b(labels, 3);
  const SeedSet seeds = SeedSet::from_assignment({2, 4}, b);
  const TruthLabels t = TruthLabels::from_assignment(b, seeds);
  EXPECT_EQ(t.nonseed_interesting, 2);
  EXPECT_EQ(TruthLabels::from_assignment(b, seeds, 1).nonseed_interesting, 1);
}

}  // namespace
}  // namespace vnom
