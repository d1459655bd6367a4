#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "roles/cost.hpp"
#include "roles/detail/parallel.hpp"
#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"
#include "roles/spectral.hpp"
#include "roles/wl.hpp"

namespace roles {

/// Agreement between a found partition and a ground truth.
struct OverlapScore {
  double value = 0.0;    ///< raw_sum / K, in [0, 1]
  double raw_sum = 0.0;  ///< max over sigma of sum_i |C_sigma(i) & GT_i| / |GT_i|
  /// permutation[i] is the found class matched to ground-truth class i.
  /// Indices >= the respective class count denote empty padding classes.
  std::vector<int> permutation;
};

namespace detail {

/// Hungarian algorithm (shortest augmenting paths with potentials) for a
/// square cost matrix. Returns assignment[row] = column of minimum total cost.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is a virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (std::size_t j = 1; j <= n; ++j) assignment[match[j] - 1] = static_cast<int>(j - 1);
  return assignment;
}

/// gain[i][j] = |found_j & truth_i| / |truth_i| on a K x K grid, K the larger
/// class count; padding rows and columns are zero.
inline std::vector<std::vector<double>> overlap_gain(const Partition& found, const Partition& truth) {
  const std::size_t kf = found.class_count();
  const std::size_t kt = truth.class_count();
  const std::size_t kk = std::max(kf, kt);
  std::vector<std::vector<double>> gain(kk, std::vector<double>(kk, 0.0));
  for (std::size_t v = 0; v < found.size(); ++v)
    gain[static_cast<std::size_t>(truth[v])][static_cast<std::size_t>(found[v])] += 1.0;
  const auto sizes = truth.class_sizes();
  for (std::size_t i = 0; i < kt; ++i)
    for (std::size_t j = 0; j < kf; ++j) gain[i][j] /= static_cast<double>(sizes[i]);
  return gain;
}

}  // namespace detail

/// Permutation-maximized overlap of `found` with `truth`, solved as an
/// assignment problem. When the class counts differ, the smaller side is
/// padded with empty classes that contribute nothing.
inline OverlapScore overlap(const Partition& found, const Partition& truth) {
  if (found.size() != truth.size())
    throw PreconditionError("overlap: partitions have " + std::to_string(found.size()) + " and " +
                            std::to_string(truth.size()) + " nodes");
  OverlapScore score;
  if (truth.size() == 0) {
    score.value = 1.0;
    return score;
  }
  const auto gain = detail::overlap_gain(found, truth);
  const std::size_t kk = gain.size();
  double top = 0.0;
  for (const auto& row : gain)
    for (double g : row) top = std::max(top, g);
  std::vector<std::vector<double>> cost(kk, std::vector<double>(kk));
  for (std::size_t i = 0; i < kk; ++i)
    for (std::size_t j = 0; j < kk; ++j) cost[i][j] = top - gain[i][j];
  score.permutation = detail::min_cost_assignment(cost);
  for (std::size_t i = 0; i < kk; ++i) score.raw_sum += gain[i][static_cast<std::size_t>(score.permutation[i])];
  score.value = score.raw_sum / static_cast<double>(kk);
  return score;
}

enum class Centrality { pagerank, eigenvector, closeness, betweenness };

inline std::string_view to_string(Centrality kind) {
  switch (kind) {
    case Centrality::pagerank: return "pagerank";
    case Centrality::eigenvector: return "eigenvector";
    case Centrality::closeness: return "closeness";
    case Centrality::betweenness: return "betweenness";
  }
  return "?";
}

struct CentralityOptions {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iter = 100000;
};

namespace detail {

inline Vector pagerank(const Graph& g, const CentralityOptions& opts) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const Vector degree = degree_vector(g);
  Vector inv = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    if (degree(i) > 0.0) inv(i) = 1.0 / degree(i);
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < opts.max_iter; ++it) {
    double dangling = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (degree(i) == 0.0) dangling += x(i);
    // A is symmetric, so A (D^-1 x) spreads each node's mass over its edges.
    const Vector spread = g.multiply(Matrix(inv.cwiseProduct(x))).col(0);
    Vector next = opts.damping * spread;
    next.array() += (opts.damping * dangling + 1.0 - opts.damping) / static_cast<double>(n);
    const double change = (next - x).cwiseAbs().sum();
    x = std::move(next);
    if (change < opts.tol) return x;
  }
  throw ConvergenceError("pagerank did not converge", 0.0);
}

inline std::vector<std::vector<std::size_t>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<std::size_t>> adj(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    g.for_each_neighbor(v, [&](std::size_t u, double) {
      if (u != v) adj[v].push_back(u);
    });
  return adj;
}

inline Vector closeness(const Graph& g) {
  const auto adj = adjacency_lists(g);
  const std::size_t n = g.size();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<std::size_t> queue;
    dist[s] = 0;
    queue.push(s);
    long total = 0;
    std::size_t reached = 0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      for (std::size_t u : adj[v]) {
        if (dist[u] >= 0) continue;
        dist[u] = dist[v] + 1;
        total += dist[u];
        ++reached;
        queue.push(u);
      }
    }
    if (total > 0) out(static_cast<Eigen::Index>(s)) = static_cast<double>(reached) / static_cast<double>(total);
  }
  return out;
}

/// Brandes' accumulation over unweighted shortest paths. Sources are split
/// into fixed chunks summed in chunk order, so results do not depend on the
/// worker count.
inline Vector betweenness(const Graph& g) {
  const auto adj = adjacency_lists(g);
  const std::size_t n = g.size();
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> sigma(n), delta(n);
    std::vector<long> dist(n);
    std::vector<std::vector<std::size_t>> pred(n);
    std::vector<std::size_t> order;
    auto& acc = partial[c];
    for (std::size_t s = c * kChunk; s < std::min(n, (c + 1) * kChunk); ++s) {
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      std::fill(dist.begin(), dist.end(), -1);
      for (auto& p : pred) p.clear();
      order.clear();
      std::queue<std::size_t> queue;
      sigma[s] = 1.0;
      dist[s] = 0;
      queue.push(s);
      while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop();
        order.push_back(v);
        for (std::size_t w : adj[v]) {
          if (dist[w] < 0) {
            dist[w] = dist[v] + 1;
            queue.push(w);
          }
          if (dist[w] == dist[v] + 1) {
            sigma[w] += sigma[v];
            pred[w].push_back(v);
          }
        }
      }
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t w = *it;
        for (std::size_t v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        if (w != s) acc[w] += delta[w];
      }
    }
  });
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (const auto& p : partial)
    for (std::size_t v = 0; v < n; ++v) out(static_cast<Eigen::Index>(v)) += p[v];
  // Every unordered pair was counted from both endpoints.
  return out / 2.0;
}

}  // namespace detail

/// Node centralities. PageRank follows edges with probability proportional
/// to weight and spreads dangling mass uniformly. Eigenvector centrality is
/// the l1-normalized Perron vector (uniform on an edgeless graph). Closeness
/// is (r - 1) / sum of BFS distances inside the node's component of size r,
/// and betweenness is unnormalized over unweighted shortest paths; isolated
/// nodes score 0 on both. Closeness and betweenness ignore edge weights.
inline Vector centrality(const Graph& g, Centrality kind, const CentralityOptions& opts = {}) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (n == 0) return Vector();
  switch (kind) {
    case Centrality::pagerank:
      return detail::pagerank(g, opts);
    case Centrality::eigenvector: {
      if (g.sparse().nonZeros() == 0) return Vector::Constant(n, 1.0 / static_cast<double>(n));
      EigenOptions eo;
      eo.tol = opts.tol;
      eo.max_iter = opts.max_iter;
      eo.check_simple = false;
      return dominant_eigenpair(g, eo).eigenvector;
    }
    case Centrality::closeness:
      return detail::closeness(g);
    case Centrality::betweenness:
      return detail::betweenness(g);
  }
  return Vector();
}

/// Sum over nodes of |value - mean value of the node's class|.
inline double cluster_deviation(const Vector& values, const Partition& p) {
  if (static_cast<std::size_t>(values.size()) != p.size())
    throw PreconditionError("cluster_deviation: value count does not match partition");
  std::vector<double> sum(p.class_count(), 0.0);
  const auto sizes = p.class_sizes();
  for (std::size_t v = 0; v < p.size(); ++v) sum[static_cast<std::size_t>(p[v])] += values(static_cast<Eigen::Index>(v));
  double total = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    const auto c = static_cast<std::size_t>(p[v]);
    total += std::abs(values(static_cast<Eigen::Index>(v)) - sum[c] / static_cast<double>(sizes[c]));
  }
  return total;
}

enum class BruteForceCost { gamma_ep_l2sq, gamma_longterm_l1 };

struct BruteForceResult {
  Partition partition;
  double cost = 0.0;
};

inline constexpr std::size_t kBruteForceMaxNodes = 12;

/// Exhaustive minimizer over all partitions into at most k non-empty classes,
/// enumerated as restricted-growth strings in lexicographic order; the first
/// minimizer wins ties. Exponential; meant as a test oracle.
inline BruteForceResult brute_force_min_cost(const Graph& g, int k, BruteForceCost kind, bool cep_compatible_only) {
  const std::size_t n = g.size();
  if (n > kBruteForceMaxNodes)
    throw PreconditionError("brute_force_min_cost: n = " + std::to_string(n) + " exceeds the limit of " +
                            std::to_string(kBruteForceMaxNodes));
  if (k < 1 || static_cast<std::size_t>(k) > n) throw PreconditionError("brute_force_min_cost: need 1 <= k <= n");

  std::optional<EigenResult> eig;
  if (kind == BruteForceCost::gamma_longterm_l1) eig = dominant_eigenpair(g);
  std::optional<Partition> cep;
  if (cep_compatible_only) cep = coarsest_ep(g).final_partition();

  BruteForceResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<int> rgs(n, 0);
  std::vector<int> prefix_max(n, 0);  // max label among rgs[0..i]
  for (;;) {
    const Partition p(rgs);
    if (!cep || is_coarsening_of(p, *cep)) {
      const double c = kind == BruteForceCost::gamma_ep_l2sq ? gamma_ep(g, p, Norm::l2_squared).value
                                                             : gamma_longterm(g, p, *eig).value;
      if (c < best.cost) best = {p, c};
    }
    // Next restricted-growth string with labels < k: bump the last position
    // that can still grow and reset everything after it.
    std::size_t i = n;
    while (i > 1 && rgs[i - 1] >= std::min(prefix_max[i - 2] + 1, k - 1)) --i;
    if (i <= 1) break;
    --i;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
  return best;
}

}  // namespace roles
