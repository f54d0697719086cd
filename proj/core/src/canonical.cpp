#include <cmath>
#include <limits>
#include <string>

#include "vnom/nomination.hpp"

namespace vnom {

double feasible_labeling_count(const SeedSet& seeds, std::span<const Index> block_sizes) {
  if (static_cast<int>(block_sizes.size()) != seeds.num_blocks())
    throw std::invalid_argument("need one block size per block");
  double log_count = std::lgamma(static_cast<double>(seeds.num_nonseeds()) + 1.0);
  for (std::size_t k = 0; k < block_sizes.size(); ++k) {
    const Index free = block_sizes[k] - seeds.per_block()[k];
    if (free < 0) throw std::invalid_argument("block size smaller than its seed count");
    log_count -= std::lgamma(static_cast<double>(free) + 1.0);
  }
  return std::round(std::exp(log_count));
}

namespace {

// Depth-first enumeration of all nonseed labelings with the prescribed block
// counts, accumulating the log-likelihood one vertex at a time.
class Enumerator {
 public:
  Enumerator(const Graph& graph, const EdgeModel& model, const SeedSet& seeds, std::vector<Index> free)
      : graph_(graph), model_(model), nonseeds_(seeds.nonseeds()), free_(std::move(free)) {
    const Index u = static_cast<Index>(nonseeds_.size());
    const Index k = model.num_blocks();
    seed_term_ = Matrix::Zero(u, k);
    for (Index t = 0; t < u; ++t) {
      const Index v = nonseeds_[static_cast<std::size_t>(t)];
      for (std::size_t s = 0; s < seeds.seeds().size(); ++s) {
        const Index w = seeds.seeds()[s];
        const int b = seeds.seed_labels()[s];
        for (Index c = 0; c < k; ++c) seed_term_(t, c) += graph(v, w) * model.theta(c, b) - model.log_partition(c, b);
      }
    }
    labels_.assign(static_cast<std::size_t>(u), -1);
    zero_sum_.assign(static_cast<std::size_t>(u), 0.0);
  }

  std::vector<double> run() {
    descend(0, 0.0);
    std::vector<double> post(labels_.size());
    for (std::size_t t = 0; t < post.size(); ++t) post[t] = total_ > 0.0 ? zero_sum_[t] / total_ : 0.0;
    return post;
  }

 private:
  void descend(std::size_t t, double log_l) {
    if (t == labels_.size()) {
      accumulate(log_l);
      return;
    }
    const Index v = nonseeds_[t];
    for (std::size_t c = 0; c < free_.size(); ++c) {
      if (free_[c] == 0) continue;
      double add = seed_term_(static_cast<Index>(t), static_cast<Index>(c));
      for (std::size_t r = 0; r < t; ++r) {
        const int l = labels_[r];
        add += graph_(v, nonseeds_[r]) * model_.theta(static_cast<Index>(c), l) -
               model_.log_partition(static_cast<Index>(c), l);
      }
      --free_[c];
      labels_[t] = static_cast<int>(c);
      descend(t + 1, log_l + add);
      labels_[t] = -1;
      ++free_[c];
    }
  }

  // Running log-sum-exp scaled to the largest leaf seen so far.
  void accumulate(double log_l) {
    if (log_l > max_) {
      const double scale = std::exp(max_ - log_l);
      total_ *= scale;
      for (double& z : zero_sum_) z *= scale;
      max_ = log_l;
    }
    const double w = std::exp(log_l - max_);
    total_ += w;
    for (std::size_t t = 0; t < labels_.size(); ++t)
      if (labels_[t] == 0) zero_sum_[t] += w;
  }

  const Graph& graph_;
  const EdgeModel& model_;
  const std::vector<Index>& nonseeds_;
  std::vector<Index> free_;
  Matrix seed_term_;
  std::vector<int> labels_;
  std::vector<double> zero_sum_;
  double total_ = 0.0;
  double max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::vector<double> canonical_posteriors(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                                         double limit) {
  const double count = feasible_labeling_count(seeds, params.block_sizes);
  if (count > limit)
    throw EnumerationLimitError("canonical scheme needs " + std::to_string(static_cast<long long>(count)) +
                                " labelings, above the limit of " + std::to_string(static_cast<long long>(limit)));
  if (params.edges.num_blocks() != seeds.num_blocks()) throw std::invalid_argument("edge model block count mismatch");
  std::vector<Index> free;
  Index total = 0;
  for (std::size_t k = 0; k < params.block_sizes.size(); ++k) {
    free.push_back(params.block_sizes[k] - seeds.per_block()[k]);
    total += params.block_sizes[k];
  }
  if (total != graph.size()) throw std::invalid_argument("block sizes must sum to the vertex count");
  return Enumerator(graph, params.edges, seeds, std::move(free)).run();
}

NominationList nominate_canonical(const Graph& graph, const NominationParameters& params, const SeedSet& seeds,
                                  Rng& rng, double limit) {
  std::vector<double> post = canonical_posteriors(graph, params, seeds, limit);
  // Rounding keeps posteriors that differ only by summation order tied.
  for (double& p : post) p = std::round(p * 1e12) / 1e12;
  return rank_descending(seeds.nonseeds(), post, rng);
}

}  // namespace vnom
