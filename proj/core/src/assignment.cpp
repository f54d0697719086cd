#include "vnom/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vnom {

namespace {

void check_cost(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("cost matrix must be square");
  if (!cost.allFinite()) throw std::invalid_argument("cost matrix entries must be finite");
}

// Row-major copy; the solvers scan rows.
std::vector<double> row_major(const Matrix& cost) {
  const Index n = cost.rows();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = cost(i, j);
  return a;
}

// Rows are inserted one at a time; each insertion grows a shortest-path tree
// over columns with reduced costs a(i, j) - u(i) - v(j) >= 0 (Dijkstra with
// potentials) until it reaches a free column, then augments along it.
Permutation shortest_augmenting_path(const Matrix& cost) {
  const Index n = cost.rows();
  const std::vector<double> a = row_major(cost);
  const double inf = std::numeric_limits<double>::infinity();
  const auto N = static_cast<std::size_t>(n);

  // 1-based with column 0 as the virtual root, row 0 unused.
  std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0), minv(N + 1);
  std::vector<std::size_t> row_of(N + 1, 0), way(N + 1, 0);
  std::vector<char> used(N + 1);

  for (std::size_t i = 1; i <= N; ++i) {
    row_of[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of[j0];
      const double* arow = a.data() + (i0 - 1) * N;
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= N; ++j) {
        if (used[j]) continue;
        const double cur = arow[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= N; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Permutation perm(N);
  for (std::size_t j = 1; j <= N; ++j) perm[row_of[j] - 1] = static_cast<Index>(j - 1);
  return perm;
}

class Munkres {
 public:
  explicit Munkres(const Matrix& cost)
      : n_(static_cast<std::size_t>(cost.rows())),
        c_(row_major(cost)),
        mark_(n_ * n_, 0),
        row_cover_(n_, 0),
        col_cover_(n_, 0) {}

  Permutation solve() {
    reduce();
    star_initial_zeros();
    while (cover_starred_columns() < n_) {
      std::size_t r = 0, col = 0;
      for (;;) {
        if (!find_uncovered_zero(r, col)) {
          adjust_by_min_uncovered();
          continue;
        }
        mark(r, col) = kPrime;
        const std::size_t star_col = find_in_row(r, kStar);
        if (star_col == n_) break;
        row_cover_[r] = 1;
        col_cover_[star_col] = 0;
      }
      augment(r, col);
    }
    Permutation perm(n_);
    for (std::size_t r = 0; r < n_; ++r) perm[r] = static_cast<Index>(find_in_row(r, kStar));
    return perm;
  }

 private:
  static constexpr char kStar = 1;
  static constexpr char kPrime = 2;

  double& at(std::size_t r, std::size_t c) { return c_[r * n_ + c]; }
  char& mark(std::size_t r, std::size_t c) { return mark_[r * n_ + c]; }

  void reduce() {
    for (std::size_t r = 0; r < n_; ++r) {
      double mn = at(r, 0);
      for (std::size_t c = 1; c < n_; ++c) mn = std::min(mn, at(r, c));
      for (std::size_t c = 0; c < n_; ++c) at(r, c) -= mn;
    }
    for (std::size_t c = 0; c < n_; ++c) {
      double mn = at(0, c);
      for (std::size_t r = 1; r < n_; ++r) mn = std::min(mn, at(r, c));
      for (std::size_t r = 0; r < n_; ++r) at(r, c) -= mn;
    }
  }

  void star_initial_zeros() {
    std::vector<char> row_done(n_, 0), col_done(n_, 0);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c)
        if (at(r, c) == 0.0 && !row_done[r] && !col_done[c]) {
          mark(r, c) = kStar;
          row_done[r] = col_done[c] = 1;
        }
  }

  std::size_t cover_starred_columns() {
    std::fill(row_cover_.begin(), row_cover_.end(), 0);
    std::fill(col_cover_.begin(), col_cover_.end(), 0);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < n_; ++c)
      for (std::size_t r = 0; r < n_; ++r)
        if (mark(r, c) == kStar) {
          col_cover_[c] = 1;
          ++covered;
          break;
        }
    return covered;
  }

  bool find_uncovered_zero(std::size_t& row, std::size_t& col) {
    for (std::size_t r = 0; r < n_; ++r) {
      if (row_cover_[r]) continue;
      for (std::size_t c = 0; c < n_; ++c)
        if (!col_cover_[c] && at(r, c) == 0.0) {
          row = r;
          col = c;
          return true;
        }
    }
    return false;
  }

  std::size_t find_in_row(std::size_t r, char what) {
    for (std::size_t c = 0; c < n_; ++c)
      if (mark(r, c) == what) return c;
    return n_;
  }

  std::size_t find_in_col(std::size_t c, char what) {
    for (std::size_t r = 0; r < n_; ++r)
      if (mark(r, c) == what) return r;
    return n_;
  }

  // Alternating prime/star path from the last prime; stars along it are
  // replaced by the primes.
  void augment(std::size_t r, std::size_t c) {
    std::vector<std::pair<std::size_t, std::size_t>> path{{r, c}};
    for (;;) {
      const std::size_t sr = find_in_col(path.back().second, kStar);
      if (sr == n_) break;
      path.emplace_back(sr, path.back().second);
      path.emplace_back(sr, find_in_row(sr, kPrime));
    }
    for (const auto& [pr, pc] : path) mark(pr, pc) = mark(pr, pc) == kStar ? 0 : kStar;
    for (auto& m : mark_)
      if (m == kPrime) m = 0;
  }

  // Subtracting from uncovered entries and adding to doubly covered ones keeps
  // existing zeros exact.
  void adjust_by_min_uncovered() {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n_; ++r)
      if (!row_cover_[r])
        for (std::size_t c = 0; c < n_; ++c)
          if (!col_cover_[c]) mn = std::min(mn, at(r, c));
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        if (row_cover_[r] && col_cover_[c]) at(r, c) += mn;
        else if (!row_cover_[r] && !col_cover_[c]) at(r, c) -= mn;
      }
  }

  std::size_t n_;
  std::vector<double> c_;
  std::vector<char> mark_;
  std::vector<char> row_cover_;
  std::vector<char> col_cover_;
};

}  // namespace

std::vector<int> solve_capacitated_assignment(const Matrix& cost, std::span<const Index> capacity) {
  const Index u = cost.rows();
  const Index k = cost.cols();
  if (static_cast<Index>(capacity.size()) != k) throw std::invalid_argument("need one capacity per column class");
  if (!cost.allFinite()) throw std::invalid_argument("cost matrix entries must be finite");
  Index total = 0;
  for (Index c : capacity) {
    if (c < 0) throw std::invalid_argument("capacities must be non-negative");
    total += c;
  }
  if (total != u) throw std::invalid_argument("capacities must sum to the number of rows");

  const double inf = std::numeric_limits<double>::infinity();
  const auto K = static_cast<std::size_t>(k);
  std::vector<int> cls(static_cast<std::size_t>(u), -1);
  std::vector<Index> load(K, 0);
  // Moving a row from class a to class b costs cost(i, b) - cost(i, a); the
  // cheapest such row per ordered pair is an edge of the class graph.
  Matrix edge(k, k);
  std::vector<Index> via(K * K);
  std::vector<double> dist(K);
  std::vector<int> pred(K);

  for (Index r = 0; r < u; ++r) {
    edge.setConstant(inf);
    for (Index i = 0; i < r; ++i) {
      const int a = cls[static_cast<std::size_t>(i)];
      for (Index b = 0; b < k; ++b) {
        if (b == a) continue;
        const double d = cost(i, b) - cost(i, a);
        if (d < edge(a, b)) {
          edge(a, b) = d;
          via[static_cast<std::size_t>(a) * K + static_cast<std::size_t>(b)] = i;
        }
      }
    }
    for (std::size_t b = 0; b < K; ++b) {
      dist[b] = cost(r, static_cast<Index>(b));
      pred[b] = -1;
    }
    // Bellman-Ford over the classes; the current assignment is optimal for the
    // rows placed so far, so the class graph has no negative cycles.
    for (std::size_t round = 1; round < K; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = 0; b < K; ++b) {
          const double w = edge(static_cast<Index>(a), static_cast<Index>(b));
          if (a == b || w == inf) continue;
          const double cand = dist[a] + w;
          if (cand < dist[b] - 1e-12 * (1.0 + std::abs(dist[b]))) {
            dist[b] = cand;
            pred[b] = static_cast<int>(a);
            changed = true;
          }
        }
      if (!changed) break;
    }
    std::size_t target = K;
    for (std::size_t b = 0; b < K; ++b)
      if (load[b] < capacity[b] && (target == K || dist[b] < dist[target])) target = b;
    ++load[target];
    std::size_t cur = target;
    for (std::size_t steps = 0; pred[cur] >= 0; ++steps) {
      if (steps > K) throw std::runtime_error("capacitated assignment: cycle in shortest-path tree");
      const auto a = static_cast<std::size_t>(pred[cur]);
      cls[static_cast<std::size_t>(via[a * K + cur])] = static_cast<int>(cur);
      cur = a;
    }
    cls[static_cast<std::size_t>(r)] = static_cast<int>(cur);
  }
  return cls;
}

double assignment_cost(const Matrix& cost, const Permutation& perm) {
  double total = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) total += cost(static_cast<Index>(i), perm[i]);
  return total;
}

bool is_permutation(const Permutation& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (Index p : perm) {
    if (p < 0 || p >= static_cast<Index>(perm.size()) || seen[static_cast<std::size_t>(p)]) return false;
    seen[static_cast<std::size_t>(p)] = 1;
  }
  return true;
}

Permutation inverse(const Permutation& perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
  return inv;
}

Assignment solve_lap(const Matrix& cost, LapMethod method) {
  check_cost(cost);
  Assignment out;
  if (cost.rows() == 0) return out;
  out.perm = method == LapMethod::kMunkres ? Munkres(cost).solve() : shortest_augmenting_path(cost);
  out.value = assignment_cost(cost, out.perm);
  return out;
}

Assignment brute_force_lap(const Matrix& cost) {
  check_cost(cost);
  if (cost.rows() > kBruteForceLapLimit) throw std::invalid_argument("brute_force_lap: matrix too large");
  Permutation perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), Index{0});
  Assignment best{perm, assignment_cost(cost, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double v = assignment_cost(cost, perm);
    if (v < best.value) best = {perm, v};
  }
  return best;
}

}  // namespace vnom
