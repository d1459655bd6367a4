#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"

namespace roles {

enum class Distance { l1, l2 };

inline double row_distance(const Matrix& x, Eigen::Index i, Eigen::Index j, Distance distance) {
  if (distance == Distance::l1) return (x.row(i) - x.row(j)).cwiseAbs().sum();
  return (x.row(i) - x.row(j)).norm();
}

/// Agglomerative average-linkage clustering of the rows of x into k clusters.
///
/// Clusters are identified by their smallest member. Each step merges the
/// pair with the smallest mean pairwise row distance; equal distances go to
/// the lexicographically smallest (id, id) pair. Average distances are kept
/// with the Lance-Williams update and every cluster caches its nearest
/// higher-id partner, which makes typical runs O(n^2).
inline Partition cluster_rows_average_linkage(const Matrix& x, int k, Distance distance = Distance::l1) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw PreconditionError("average linkage: need 1 <= k <= number of rows");
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] =
          row_distance(x, static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), distance);

  std::vector<bool> active(n, true);
  std::vector<double> weight(n, 1.0);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<std::size_t> nn(n, kNone);
  std::vector<double> nn_dist(n, kInf);

  auto refresh = [&](std::size_t i) {
    nn[i] = kNone;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && dist[i * n + j] < nn_dist[i]) {
        nn_dist[i] = dist[i * n + j];
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t clusters = n; clusters > static_cast<std::size_t>(k); --clusters) {
    std::size_t a = kNone;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && nn[i] != kNone && (a == kNone || nn_dist[i] < nn_dist[a])) a = i;
    const std::size_t b = nn[a];

    const double wa = weight[a], wb = weight[b];
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == a || c == b) continue;
      const double merged = (wa * dist[a * n + c] + wb * dist[b * n + c]) / (wa + wb);
      dist[a * n + c] = dist[c * n + a] = merged;
    }
    weight[a] += wb;
    active[b] = false;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();

    for (std::size_t c = 0; c < b; ++c) {
      if (!active[c] || c == a) continue;
      if (nn[c] == a || nn[c] == b) {
        refresh(c);
      } else if (c < a && (dist[c * n + a] < nn_dist[c] || (dist[c * n + a] == nn_dist[c] && a < nn[c]))) {
        nn[c] = a;
        nn_dist[c] = dist[c * n + a];
      }
    }
    refresh(a);
  }

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t v : members[i]) labels[v] = static_cast<int>(i);
  return Partition(labels);
}

namespace detail {

/// k-means++ seeding: indices of up to k rows. Stops early once every row
/// coincides with a chosen center.
inline std::vector<Eigen::Index> kmeanspp_seeds(const Matrix& x, int k, Engine& rng) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> seeds{static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)))};
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (x.row(i) - x.row(seeds[0])).squaredNorm();
  while (static_cast<int>(seeds.size()) < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    if (!(total > 0.0)) break;
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    Eigen::Index pick = n - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += d2[static_cast<std::size_t>(i)];
      if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
        pick = i;
        break;
      }
    }
    while (d2[static_cast<std::size_t>(pick)] == 0.0) --pick;
    seeds.push_back(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], (x.row(i) - x.row(pick)).squaredNorm());
  }
  return seeds;
}

}  // namespace detail

/// Lloyd's k-means on rows with k-means++ seeding. Clusters that end up
/// empty are dropped.
inline Partition cluster_rows_kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iter = 300) {
  const Eigen::Index n = x.rows();
  if (k < 1 || k > n) throw PreconditionError("kmeans: need 1 <= k <= number of rows");
  detail::Engine rng(seed);
  const auto seeds = detail::kmeanspp_seeds(x, k, rng);
  Matrix centers(static_cast<Eigen::Index>(seeds.size()), x.cols());
  for (std::size_t j = 0; j < seeds.size(); ++j) centers.row(static_cast<Eigen::Index>(j)) = x.row(seeds[j]);

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(centers.rows(), x.cols());
    std::vector<double> counts(static_cast<std::size_t>(centers.rows()), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] += 1.0;
    }
    for (Eigen::Index j = 0; j < centers.rows(); ++j)
      if (counts[static_cast<std::size_t>(j)] > 0.0) centers.row(j) = sums.row(j) / counts[static_cast<std::size_t>(j)];
  }
  return Partition(labels);
}

struct FuzzyOptions {
  double tol = 1e-6;
  int max_iter = 300;
  /// Clusters with total membership below drop_fraction * n are removed.
  double drop_fraction = 1e-6;
};

/// Fuzzy c-means on rows (Euclidean distance, fuzzifier m > 1).
///
/// Centers start from k-means++ seeds. A row sitting exactly on one or more
/// centers belongs to them in equal parts. After convergence, coincident
/// centers are merged and clusters whose total membership falls below the
/// drop threshold are removed, so fewer than k clusters may come back.
inline SoftAssignment cluster_rows_fuzzy_cmeans(const Matrix& x, int k, double m, std::uint64_t seed,
                                                const FuzzyOptions& opts = {}) {
  const Eigen::Index n = x.rows();
  if (k < 1 || k > n) throw PreconditionError("fuzzy c-means: need 1 <= k <= number of rows");
  if (!(m > 1.0)) throw PreconditionError("fuzzy c-means: fuzzifier must exceed 1");
  detail::Engine rng(seed);
  const auto seeds = detail::kmeanspp_seeds(x, k, rng);
  Matrix centers(static_cast<Eigen::Index>(seeds.size()), x.cols());
  for (std::size_t j = 0; j < seeds.size(); ++j) centers.row(static_cast<Eigen::Index>(j)) = x.row(seeds[j]);
  const Eigen::Index c = centers.rows();
  const double exponent = 2.0 / (m - 1.0);

  Matrix u = Matrix::Zero(n, c);
  Vector d(c);
  auto update_memberships = [&] {
    double change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int zeros = 0;
      for (Eigen::Index j = 0; j < c; ++j) {
        d(j) = (x.row(i) - centers.row(j)).norm();
        if (d(j) == 0.0) ++zeros;
      }
      for (Eigen::Index j = 0; j < c; ++j) {
        double value;
        if (zeros > 0) {
          value = d(j) == 0.0 ? 1.0 / zeros : 0.0;
        } else {
          double denom = 0.0;
          for (Eigen::Index l = 0; l < c; ++l) denom += std::pow(d(j) / d(l), exponent);
          value = 1.0 / denom;
        }
        change = std::max(change, std::abs(value - u(i, j)));
        u(i, j) = value;
      }
    }
    return change;
  };

  update_memberships();
  for (int it = 0; it < opts.max_iter; ++it) {
    const Matrix um = u.array().pow(m).matrix();
    const Vector mass = um.colwise().sum().transpose();
    const Matrix weighted = um.transpose() * x;
    for (Eigen::Index j = 0; j < c; ++j)
      if (mass(j) > 0.0) centers.row(j) = weighted.row(j) / mass(j);
    if (update_memberships() < opts.tol) break;
  }

  // Merge coincident centers, then drop negligible clusters.
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(c));
  for (Eigen::Index j = 0; j < c; ++j) {
    owner[static_cast<std::size_t>(j)] = j;
    for (Eigen::Index l = 0; l < j; ++l) {
      const double scale = 1.0 + std::max(centers.row(j).norm(), centers.row(l).norm());
      if (owner[static_cast<std::size_t>(l)] == l && (centers.row(j) - centers.row(l)).norm() <= 1e-9 * scale) {
        owner[static_cast<std::size_t>(j)] = l;
        break;
      }
    }
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < c; ++j) {
    if (owner[static_cast<std::size_t>(j)] != j) {
      u.col(owner[static_cast<std::size_t>(j)]) += u.col(j);
      u.col(j).setZero();
    }
  }
  for (Eigen::Index j = 0; j < c; ++j)
    if (owner[static_cast<std::size_t>(j)] == j && u.col(j).sum() >= opts.drop_fraction * static_cast<double>(n))
      kept.push_back(j);
  if (kept.empty()) {
    Eigen::Index best = 0;
    u.colwise().sum().maxCoeff(&best);
    kept.push_back(best);
  }
  Matrix out(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = u.col(kept[j]);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = out.row(i).sum();
    if (s > 0.0) out.row(i) /= s;
    else out.row(i).setConstant(1.0 / static_cast<double>(out.cols()));
  }
  return SoftAssignment(std::move(out));
}

}  // namespace roles
