#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace vnom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Permutation in one-line notation: perm[i] is the image of i.
using Permutation = std::vector<Index>;

using Rng = std::mt19937_64;

// Independent stream for one unit of work (trial, restart, scheme) derived from
// a master seed. Distinct key tuples give unrelated engine states.
inline Rng derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

}  // namespace vnom
