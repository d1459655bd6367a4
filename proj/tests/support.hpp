#pragma once

// Shared fixtures and slow reference implementations for the test suite.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "roles/roles.hpp"

namespace testing_support {

using roles::Graph;
using roles::Matrix;
using roles::Partition;
using Rng = std::mt19937_64;

inline double unit(Rng& rng) { return roles::detail::uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(roles::detail::uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline Graph from_pairs(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<roles::Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
  return Graph::from_edges(n, edges);
}

inline Graph path(std::size_t n) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i + 1 < static_cast<Eigen::Index>(n); ++i) a(i, i + 1) = a(i + 1, i) = 1.0;
  return Graph::from_dense(a);
}

inline Graph cycle(std::size_t n) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const Eigen::Index j = (i + 1) % static_cast<Eigen::Index>(n);
    a(i, j) = a(j, i) = 1.0;
  }
  return Graph::from_dense(a);
}

/// Node 0 is the center.
inline Graph star(std::size_t leaves) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(leaves + 1), static_cast<Eigen::Index>(leaves + 1));
  for (Eigen::Index i = 1; i <= static_cast<Eigen::Index>(leaves); ++i) a(0, i) = a(i, 0) = 1.0;
  return Graph::from_dense(a);
}

inline Graph complete(std::size_t n) {
  Matrix a = Matrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.diagonal().setZero();
  return Graph::from_dense(a);
}

/// Erdos-Renyi style graph; weights uniform in (0.5, 1.5] when weighted.
inline Matrix random_adjacency(Rng& rng, std::size_t n, double p, bool weighted = false, bool loops = false) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
    for (Eigen::Index j = loops ? i : i + 1; j < static_cast<Eigen::Index>(n); ++j)
      if (unit(rng) < p) a(i, j) = a(j, i) = weighted ? 1.5 - unit(rng) : 1.0;
  return a;
}

inline Graph random_graph(Rng& rng, std::size_t n, double p, bool weighted = false, bool loops = false) {
  return Graph::from_dense(random_adjacency(rng, n, p, weighted, loops));
}

inline bool connected(const Graph& g) {
  if (g.size() == 0) return true;
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    g.for_each_neighbor(v, [&](std::size_t u, double) {
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
    });
  }
  return count == g.size();
}

inline Graph random_connected_graph(Rng& rng, std::size_t n, double p, bool weighted = false) {
  for (;;) {
    Graph g = random_graph(rng, n, p, weighted);
    if (connected(g)) return g;
  }
}

/// Graph whose cEP is non-trivial: disjoint copies of a random graph joined
/// to a common hub, so corresponding copy nodes are equivalent.
inline Graph symmetric_graph(Rng& rng, std::size_t base, std::size_t copies, double p) {
  const Matrix b = random_adjacency(rng, base, p);
  const auto n = static_cast<Eigen::Index>(base * copies + 1);
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t c = 0; c < copies; ++c) {
    const auto off = static_cast<Eigen::Index>(c * base);
    a.block(off, off, static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(base)) = b;
    a(n - 1, off) = a(off, n - 1) = 1.0;
  }
  return Graph::from_dense(a);
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[roles::detail::uniform_index(rng, i)]);
  return perm;
}

/// Node v of g becomes node perm[v].
inline Graph permute(const Graph& g, const std::vector<std::size_t>& perm) {
  const Matrix a = g.to_dense();
  Matrix b(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      b(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
        static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)])) = a(i, j);
  return Graph::from_dense(b);
}

inline Partition permute(const Partition& p, const std::vector<std::size_t>& perm) {
  std::vector<int> labels(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) labels[perm[v]] = p[v];
  return Partition(labels);
}

inline Partition random_partition(Rng& rng, std::size_t n, int k) {
  std::vector<int> labels(n);
  for (auto& l : labels) l = uniform_int(rng, 0, k - 1);
  return Partition(labels);
}

/// Calls f(labels) for every set partition of n items into at most max_k
/// classes, as restricted-growth strings. Written recursively, independent
/// of the library's iterative enumeration.
inline void for_each_set_partition(std::size_t n, int max_k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> labels(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      f(labels);
      return;
    }
    for (int c = 0; c <= std::min(used, max_k - 1); ++c) {
      labels[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) f(labels);
  else rec(0, 0);
}

/// Dense, literal evaluation of || A H - H (H^T H)^{-1} H^T A H ||.
inline Matrix dense_residual(const Matrix& a, const Matrix& h) {
  const Matrix d = h.transpose() * h;
  return a * h - h * d.inverse() * h.transpose() * a * h;
}

/// Spectrum of a dense symmetric matrix, ascending.
inline Eigen::VectorXd symmetric_spectrum(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline bool is_bipartite(const Graph& g) {
  std::vector<int> side(g.size(), -1);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<std::size_t> stack{s};
    bool ok = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      g.for_each_neighbor(v, [&](std::size_t u, double) {
        if (side[u] < 0) {
          side[u] = 1 - side[v];
          stack.push_back(u);
        } else if (side[u] == side[v]) {
          ok = false;
        }
      });
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace testing_support
