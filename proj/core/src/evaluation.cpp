#include "vnom/evaluation.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace vnom {

namespace {

__extension__ typedef unsigned __int128 Wide;

Index interesting_count(const NominationList& list, const TruthLabels& truth) {
  const Index u1 = truth.nonseed_interesting;
  if (u1 < 1) throw std::invalid_argument("average precision needs at least one interesting nonseed");
  if (u1 > list.size()) throw std::invalid_argument("list shorter than the interesting count");
  return u1;
}

bool hit(const NominationList& list, const TruthLabels& truth, Index rank) {
  const Index v = list.order[static_cast<std::size_t>(rank)];
  if (v < 0 || v >= static_cast<Index>(truth.interesting.size())) throw std::invalid_argument("vertex out of range");
  return truth.interesting[static_cast<std::size_t>(v)];
}

// lcm(1..k), or nothing once it would leave room for less than k^2 multiples.
std::optional<Wide> harmonic_denominator(Index k) {
  const Wide cap = ~Wide{0} / (static_cast<Wide>(k) * static_cast<Wide>(k) + 1);
  Wide l = 1;
  for (Index i = 2; i <= k; ++i) {
    Wide a = l, b = static_cast<Wide>(i);
    while (b != 0) {
      const Wide t = a % b;
      a = b;
      b = t;
    }
    const Wide step = static_cast<Wide>(i) / a;
    if (l > cap / step) return std::nullopt;
    l *= step;
  }
  return l;
}

double ratio(Wide num, Wide den) { return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den)); }

}  // namespace

TruthLabels TruthLabels::from_assignment(const BlockAssignment& truth, const SeedSet& seeds, int interest_block) {
  if (truth.size() != seeds.num_vertices()) throw std::invalid_argument("truth and seeds differ in size");
  TruthLabels out;
  out.interesting.resize(static_cast<std::size_t>(truth.size()));
  for (Index v = 0; v < truth.size(); ++v) out.interesting[static_cast<std::size_t>(v)] = truth[v] == interest_block;
  for (Index v : seeds.nonseeds())
    if (out.interesting[static_cast<std::size_t>(v)]) ++out.nonseed_interesting;
  return out;
}

// Both AP forms are evaluated as exact rationals over lcm(1..u1) whenever that
// fits in 128 bits, so they agree bit for bit.
double average_precision(const NominationList& list, const TruthLabels& truth) {
  const Index u1 = interesting_count(list, truth);
  if (const auto l = harmonic_denominator(u1)) {
    Wide num = 0, hits = 0;
    for (Index i = 1; i <= u1; ++i) {
      if (hit(list, truth, i - 1)) ++hits;
      num += hits * (*l / static_cast<Wide>(i));
    }
    return ratio(num, *l * static_cast<Wide>(u1));
  }
  double sum = 0.0;
  Index hits = 0;
  for (Index i = 1; i <= u1; ++i) {
    if (hit(list, truth, i - 1)) ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i);
  }
  return sum / static_cast<double>(u1);
}

double average_precision_harmonic(const NominationList& list, const TruthLabels& truth) {
  const Index u1 = interesting_count(list, truth);
  if (const auto l = harmonic_denominator(u1)) {
    // tail[i] = L * (H_u1 - H_{i-1}).
    std::vector<Wide> tail(static_cast<std::size_t>(u1) + 2, 0);
    for (Index i = u1; i >= 1; --i) tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i) + 1] + *l / static_cast<Wide>(i);
    Wide num = 0;
    for (Index i = 1; i <= u1; ++i)
      if (hit(list, truth, i - 1)) num += tail[static_cast<std::size_t>(i)];
    return ratio(num, *l * static_cast<Wide>(u1));
  }
  std::vector<double> h(static_cast<std::size_t>(u1) + 1, 0.0);
  for (Index i = 1; i <= u1; ++i) h[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(i) - 1] + 1.0 / static_cast<double>(i);
  double sum = 0.0;
  for (Index i = 1; i <= u1; ++i)
    if (hit(list, truth, i - 1)) sum += (h[static_cast<std::size_t>(u1)] - h[static_cast<std::size_t>(i) - 1]);
  return sum / static_cast<double>(u1);
}

double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("partitions must cover the same vertices");
  const double n = static_cast<double>(pred.size());
  std::map<std::pair<int, int>, double> cells;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    cells[{pred[i], truth[i]}] += 1.0;
    rows[pred[i]] += 1.0;
    cols[truth[i]] += 1.0;
  }
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, c] : cells) index += pairs(c);
  for (const auto& [key, c] : rows) sum_rows += pairs(c);
  for (const auto& [key, c] : cols) sum_cols += pairs(c);
  const double total = pairs(n);
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return index == max_index ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

MeanNominationCurve mean_nomination_curve(const std::vector<std::vector<bool>>& interesting) {
  if (interesting.empty()) throw std::invalid_argument("mean nomination curve needs at least one list");
  const std::size_t len = interesting.front().size();
  for (const auto& row : interesting)
    if (row.size() != len) throw std::invalid_argument("all lists must have the same length");
  const double t = static_cast<double>(interesting.size());
  MeanNominationCurve out;
  out.trials = static_cast<Index>(interesting.size());
  out.prob.resize(len);
  out.stderr_.resize(len);
  for (std::size_t r = 0; r < len; ++r) {
    double ones = 0.0;
    for (const auto& row : interesting) ones += row[r] ? 1.0 : 0.0;
    const double p = ones / t;
    out.prob[r] = p;
    // Sample variance of a 0/1 column.
    out.stderr_[r] = t > 1.0 ? std::sqrt(p * (1.0 - p) * t / (t - 1.0) / t) : 0.0;
  }
  return out;
}

MeanNominationCurve mean_nomination_curve(std::span<const NominationList> lists, const TruthLabels& truth) {
  std::vector<std::vector<bool>> rows;
  rows.reserve(lists.size());
  for (const auto& l : lists) rows.push_back(rank_indicators(l, truth));
  return mean_nomination_curve(rows);
}

std::vector<bool> rank_indicators(const NominationList& list, const TruthLabels& truth) {
  std::vector<bool> out(list.order.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = hit(list, truth, static_cast<Index>(r));
  return out;
}

}  // namespace vnom
