#pragma once

#include <span>
#include <vector>

#include "vnom/nomination.hpp"
#include "vnom/sbm.hpp"

namespace vnom {

// Membership of each vertex in the block of interest; count covers nonseeds.
struct TruthLabels {
  std::vector<bool> interesting;  // per vertex
  Index nonseed_interesting = 0;

  static TruthLabels from_assignment(const BlockAssignment& truth, const SeedSet& seeds,
                                     int interest_block = 0);
};

// Mean over the first u_1 ranks of the precision at that rank.
double average_precision(const NominationList& list, const TruthLabels& truth);

// Same value through the harmonic-number weights (H_{u1} - H_{i-1}) / u_1.
double average_precision_harmonic(const NominationList& list, const TruthLabels& truth);

// Hubert-Arabie pair-counting index. Labels may be arbitrary non-negative ints.
double adjusted_rand_index(std::span<const int> pred, std::span<const int> truth);

struct MeanNominationCurve {
  std::vector<double> prob;    // per rank
  std::vector<double> stderr_; // per rank, sample sd / sqrt(trials)
  Index trials = 0;
};

// interesting[t][r]: whether rank r of trial t was interesting.
MeanNominationCurve mean_nomination_curve(const std::vector<std::vector<bool>>& interesting);

MeanNominationCurve mean_nomination_curve(std::span<const NominationList> lists,
                                          const TruthLabels& truth);

// Indicator per rank.
std::vector<bool> rank_indicators(const NominationList& list, const TruthLabels& truth);

}  // namespace vnom
