#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <span>
#include <vector>

#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"

namespace roles {

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  /// Also estimate the second eigenvalue to decide whether the dominant one
  /// is simple. Costs a second (deflated) power iteration.
  bool check_simple = true;
};

/// Dominant eigenpair of a nonnegative symmetric adjacency matrix.
struct EigenResult {
  double eigenvalue = 0.0;       ///< rho(A)
  Vector eigenvector;            ///< l1-normalized, entrywise nonnegative
  int iterations = 0;
  double residual = 0.0;         ///< ||A v - lambda v|| / ||v||
  bool dominant_simple = true;   ///< false when a second eigenvalue ties rho(A)
  double second_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double kSimplicityGap = 1e-8;

/// Power iteration on A + I from the all-ones vector. The unit shift keeps
/// the Perron root strictly dominant in magnitude on bipartite graphs (whose
/// spectrum is symmetric about zero) without changing eigenvectors.
///
/// With `check_simple`, a deflated iteration on A + rho*I - 2 rho x x^T
/// estimates lambda_2; the dominant eigenvalue is reported non-simple when
/// rho - lambda_2 <= 1e-8 * max(1, rho).
inline EigenResult dominant_eigenpair(const Graph& g, const EigenOptions& opts = {}) {
  const std::size_t n = g.size();
  if (n == 0) throw PreconditionError("dominant_eigenpair: empty graph");
  if (g.sparse().nonZeros() == 0) throw PreconditionError("dominant_eigenpair: zero adjacency matrix");
  constexpr double kShift = 1.0;

  const auto rows = static_cast<Eigen::Index>(n);
  Vector x = Vector::Constant(rows, 1.0 / std::sqrt(static_cast<double>(n)));
  EigenResult result;
  double best = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vector y = g.multiply(x);
    const double lambda = x.dot(y);
    const double r = (y - lambda * x).norm();
    best = std::min(best, r);
    result.iterations = it;
    if (r <= opts.tol) {
      result.eigenvalue = lambda;
      result.residual = r;
      converged = true;
      break;
    }
    x = y + kShift * x;
    x /= x.norm();
  }
  if (!converged) throw ConvergenceError("dominant_eigenpair: no convergence", best);

  if (x.sum() < 0.0) x = -x;
  x = x.cwiseMax(0.0);
  x /= x.norm();

  if (opts.check_simple) {
    // Deflated operator B z = (A + rho I) z - 2 rho x (x.z): PSD on the
    // complement of x, so its Rayleigh quotient rises monotonically to
    // lambda_2 + rho.
    const double rho = result.eigenvalue;
    const double shift = std::max(rho, 1e-300);
    detail::Engine rng(0x5eed5eedULL);
    Vector z(rows);
    for (Eigen::Index i = 0; i < rows; ++i) z(i) = detail::uniform01(rng) - 0.5;
    z -= x.dot(z) * x;
    double mu = -std::numeric_limits<double>::infinity();
    if (z.norm() > 0.0) {
      z /= z.norm();
      int flat = 0;
      for (int it = 0; it < opts.max_iter; ++it) {
        Vector w = g.multiply(z) + shift * z;
        w -= (rho + shift) * x.dot(z) * x;
        const double next_mu = z.dot(w);
        const double r = (w - next_mu * z).norm();
        flat = std::abs(next_mu - mu) <= 1e-15 * std::max(1.0, std::abs(next_mu)) ? flat + 1 : 0;
        mu = next_mu;
        if (mu - shift >= rho - kSimplicityGap * std::max(1.0, rho)) break;
        if (r <= opts.tol || flat >= 10) break;
        const double norm = w.norm();
        if (norm == 0.0) break;
        z = w / norm;
        z -= x.dot(z) * x;
        z /= z.norm();
      }
      result.second_eigenvalue = mu - shift;
      result.dominant_simple = rho - result.second_eigenvalue > kSimplicityGap * std::max(1.0, rho);
    }
  }

  result.eigenvector = x / x.sum();
  result.residual = (g.multiply(result.eigenvector) - result.eigenvalue * result.eigenvector).norm() /
                    result.eigenvector.norm();
  return result;
}

/// True when the connected component carrying the Perron vector's largest
/// entry is bipartite (so -rho(A) is an eigenvalue as well).
inline bool perron_component_bipartite(const Graph& g, const Vector& perron) {
  const std::size_t n = g.size();
  Eigen::Index start = 0;
  perron.maxCoeff(&start);
  std::vector<int> side(n, -1);
  std::queue<std::size_t> queue;
  side[static_cast<std::size_t>(start)] = 0;
  queue.push(static_cast<std::size_t>(start));
  bool bipartite = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop();
    g.for_each_neighbor(v, [&](std::size_t u, double) {
      if (side[u] < 0) {
        side[u] = 1 - side[v];
        queue.push(u);
      } else if (side[u] == side[v]) {
        bipartite = false;
      }
    });
  }
  return bipartite;
}

enum class Objective1d {
  abs_dev_from_mean,      ///< sum |x - mean of its cluster|
  squared_dev_from_mean,  ///< classic 1-D k-means
};

/// Objective value of a given clustering of `values`, summed per class over
/// members in ascending node order.
inline double cluster_1d_cost(std::span<const double> values, const Partition& p, Objective1d objective) {
  if (values.size() != p.size()) throw PreconditionError("cluster_1d_cost: size mismatch");
  double total = 0.0;
  for (const auto& members : p.classes()) {
    double sum = 0.0;
    for (std::size_t v : members) sum += values[v];
    const double mean = sum / static_cast<double>(members.size());
    for (std::size_t v : members) {
      const double d = values[v] - mean;
      total += objective == Objective1d::abs_dev_from_mean ? std::abs(d) : d * d;
    }
  }
  return total;
}

/// Exact optimum of a 1-D clustering objective over all partitions into at
/// most k classes.
///
/// Optimal clusters are contiguous in sorted order for both objectives, so a
/// dynamic program over cut positions with prefix sums suffices. Values that
/// differ by at most `merge_tol` from their sorted predecessor are never cut
/// apart. Ties prefer longer earlier segments, then more clusters. The DP is
/// O(k n^2 log n); fine for the graph sizes this library targets.
inline Partition cluster_1d(std::span<const double> values, int k, Objective1d objective,
                            double merge_tol = 0.0) {
  const std::size_t n = values.size();
  if (k < 1) throw PreconditionError("cluster_1d: k must be >= 1");
  if (static_cast<std::size_t>(k) > n) throw PreconditionError("cluster_1d: k exceeds the number of values");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = values[order[i]];

  // Group boundaries: positions in sorted order where a cut is allowed.
  std::vector<std::size_t> bounds{0};
  for (std::size_t i = 1; i < n; ++i)
    if (xs[i] - xs[i - 1] > merge_tol) bounds.push_back(i);
  bounds.push_back(n);
  const std::size_t groups = bounds.size() - 1;

  std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + xs[i];
    prefix_sq[i + 1] = prefix_sq[i] + xs[i] * xs[i];
  }
  auto segment_cost = [&](std::size_t from_group, std::size_t to_group) {
    const std::size_t a = bounds[from_group], b = bounds[to_group];
    const double m = static_cast<double>(b - a);
    const double s = prefix[b] - prefix[a];
    const double mean = s / m;
    if (objective == Objective1d::squared_dev_from_mean)
      return std::max(0.0, (prefix_sq[b] - prefix_sq[a]) - s * mean);
    const auto split = static_cast<std::size_t>(std::lower_bound(xs.begin() + static_cast<std::ptrdiff_t>(a),
                                                                 xs.begin() + static_cast<std::ptrdiff_t>(b), mean) -
                                                xs.begin());
    const double below = mean * static_cast<double>(split - a) - (prefix[split] - prefix[a]);
    const double above = (prefix[b] - prefix[split]) - mean * static_cast<double>(b - split);
    return below + above;
  };

  const std::size_t max_segments = std::min<std::size_t>(static_cast<std::size_t>(k), groups);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[j][g]: best cost for the first g groups in j + 1 segments.
  std::vector<std::vector<double>> cost(max_segments, std::vector<double>(groups + 1, kInf));
  std::vector<std::vector<std::size_t>> cut(max_segments, std::vector<std::size_t>(groups + 1, 0));
  for (std::size_t g = 1; g <= groups; ++g) cost[0][g] = segment_cost(0, g);
  for (std::size_t j = 1; j < max_segments; ++j) {
    for (std::size_t g = j + 1; g <= groups; ++g) {
      for (std::size_t h = j; h < g; ++h) {
        const double c = cost[j - 1][h] + segment_cost(h, g);
        if (c <= cost[j][g]) {
          cost[j][g] = c;
          cut[j][g] = h;
        }
      }
    }
  }
  std::size_t best_j = 0;
  for (std::size_t j = 1; j < max_segments; ++j)
    if (cost[j][groups] <= cost[best_j][groups]) best_j = j;

  std::vector<int> labels(n);
  std::size_t g = groups;
  for (std::size_t j = best_j + 1; j-- > 0;) {
    const std::size_t h = j == 0 ? 0 : cut[j][g];
    for (std::size_t i = bounds[h]; i < bounds[g]; ++i) labels[order[i]] = static_cast<int>(j);
    g = h;
  }
  return Partition(labels);
}

/// EV-based clustering of an already computed eigenpair: 1-D clustering of
/// the Perron vector under the abs-deviation-from-mean objective, which
/// minimizes the l1 long-term cost. Eigenvector entries equal up to 1e-9
/// relative are kept together, so the result never splits a cEP class.
inline Partition ev_cluster(const EigenResult& eig, int k) {
  if (!eig.dominant_simple)
    throw NonSimpleDominantError("ev_cluster: dominant eigenvalue is not simple");
  const Vector& v = eig.eigenvector;
  if (k < 1 || k > v.size()) throw PreconditionError("ev_cluster: need 1 <= k <= n");
  return cluster_1d(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), k,
                    Objective1d::abs_dev_from_mean, 1e-9 * v.maxCoeff());
}

inline Partition ev_cluster(const Graph& g, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > g.size()) throw PreconditionError("ev_cluster: need 1 <= k <= n");
  return ev_cluster(dominant_eigenpair(g), k);
}

/// Graph-level embedding: class sizes and mean eigenvector value per class
/// of the EV clustering, ordered by ascending center.
struct EvEmbedding {
  std::vector<std::size_t> sizes;
  std::vector<double> centers;
};

inline EvEmbedding ev_embedding(const Graph& g, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > g.size()) throw PreconditionError("ev_embedding: need 1 <= k <= n");
  const EigenResult eig = dominant_eigenpair(g);
  const Partition p = ev_cluster(eig, k);
  const auto members = p.classes();
  std::vector<std::pair<double, std::size_t>> rows;
  for (const auto& cls : members) {
    double sum = 0.0;
    for (std::size_t v : cls) sum += eig.eigenvector(static_cast<Eigen::Index>(v));
    rows.emplace_back(sum / static_cast<double>(cls.size()), cls.size());
  }
  std::sort(rows.begin(), rows.end());
  EvEmbedding emb;
  for (const auto& [center, size] : rows) {
    emb.sizes.push_back(size);
    emb.centers.push_back(center);
  }
  return emb;
}

/// Flat CSV row: k, sizes..., centers...
inline void write_embedding_csv_row(std::ostream& out, const EvEmbedding& emb) {
  out << emb.sizes.size();
  for (std::size_t s : emb.sizes) out << ',' << s;
  for (double c : emb.centers) out << ',' << detail::format_real(c);
  out << '\n';
}

}  // namespace roles
