#pragma once

#include <span>
#include <vector>

#include "vnom/types.hpp"

namespace vnom {

// A solution of the square linear assignment problem: row i is assigned
// column perm[i], and value = sum_i cost(i, perm[i]) accumulated in row order.
struct Assignment {
  Permutation perm;
  double value = 0.0;
};

enum class LapMethod {
  kShortestPath,  // potentials + Dijkstra-style shortest augmenting paths, O(u^3)
  kMunkres,       // classic zero-covering Hungarian method, kept as a cross-check
};

// Minimizes sum_i cost(i, perm[i]). Throws std::invalid_argument for
// non-square or non-finite input. Deterministic given the input.
Assignment solve_lap(const Matrix& cost, LapMethod method = LapMethod::kShortestPath);

inline constexpr Index kBruteForceLapLimit = 9;

// Exhaustive minimum over all u! permutations in lexicographic order; the
// first minimizer found wins.
Assignment brute_force_lap(const Matrix& cost);

// Rows to K column classes, class k taking exactly capacity[k] rows; minimizes
// sum_i cost(i, class[i]). Equivalent to a u x u LAP whose columns repeat
// within each class, solved by successive shortest paths over the classes in
// O(u^2 K + u K^3). Returns the class of each row.
std::vector<int> solve_capacitated_assignment(const Matrix& cost, std::span<const Index> capacity);

double assignment_cost(const Matrix& cost, const Permutation& perm);

bool is_permutation(const Permutation& perm);

Permutation inverse(const Permutation& perm);

}  // namespace vnom
