#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roles/clustering.hpp"
#include "roles/cost.hpp"
#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"

namespace roles {

enum class Backend { average_linkage, kmeans, fuzzy_cmeans };

/// How the adjacency matrix is scaled once before iterating.
enum class Normalization { spectral, row_stochastic, none };

inline Backend parse_backend(std::string_view name) {
  if (name == "average_linkage") return Backend::average_linkage;
  if (name == "kmeans") return Backend::kmeans;
  if (name == "fuzzy_cmeans") return Backend::fuzzy_cmeans;
  throw PreconditionError("unknown backend \"" + std::string(name) + "\"");
}

inline Normalization parse_normalization(std::string_view name) {
  if (name == "spectral") return Normalization::spectral;
  if (name == "row_stochastic") return Normalization::row_stochastic;
  if (name == "none") return Normalization::none;
  throw PreconditionError("unknown normalization \"" + std::string(name) + "\"");
}

struct AwlConfig {
  int k = 2;
  Backend backend = Backend::average_linkage;
  int max_steps = 30;
  /// Stop once this many consecutive hardened partitions (the initial one
  /// included) are identical.
  int stabilization = 2;
  double fuzzifier = 2.0;
  /// Defaults to l1 for average linkage and l2 otherwise.
  std::optional<Distance> distance;
  Normalization normalization = Normalization::spectral;
  std::uint64_t seed = 0;
};

struct AwlStep {
  Matrix embedding;          ///< X = A H for this step
  SoftAssignment assignment; ///< clustering output (one-hot for hard backends)
  Partition partition;       ///< hardened assignment
};

struct AwlResult {
  SoftAssignment assignment;
  std::vector<AwlStep> trace;
  int steps_run = 0;
  bool converged = false;

  Partition partition() const { return harden(assignment); }
};

/// Approximate Weisfeiler-Leman: starting from the uniform assignment
/// H = (1/k) 1 1^T, repeat X = A H, H = cluster(X).
///
/// Hard backends (average linkage, k-means) feed a one-hot H to the next
/// step; fuzzy c-means feeds its fractional memberships directly. A backend
/// returning fewer than k clusters lowers k for the remaining steps.
inline AwlResult approx_wl(const Graph& g, const AwlConfig& cfg) {
  const std::size_t n = g.size();
  if (n == 0) throw PreconditionError("approx_wl: empty graph");
  if (cfg.k < 1 || static_cast<std::size_t>(cfg.k) > n) throw PreconditionError("approx_wl: need 1 <= k <= n");
  if (cfg.max_steps < 1) throw PreconditionError("approx_wl: max_steps must be >= 1");
  if (cfg.stabilization < 1) throw PreconditionError("approx_wl: stabilization must be >= 1");
  if (!(cfg.fuzzifier > 1.0)) throw PreconditionError("approx_wl: fuzzifier must exceed 1");
  const Distance distance =
      cfg.distance.value_or(cfg.backend == Backend::average_linkage ? Distance::l1 : Distance::l2);

  double scale = 1.0;
  Vector row_scale;
  if (cfg.normalization == Normalization::spectral && g.sparse().nonZeros() > 0) {
    scale = 1.0 / spectral_radius(g);
  } else if (cfg.normalization == Normalization::row_stochastic) {
    row_scale = degree_vector(g);
    for (Eigen::Index i = 0; i < row_scale.size(); ++i) row_scale(i) = row_scale(i) > 0.0 ? 1.0 / row_scale(i) : 0.0;
  }
  auto embed = [&](const Matrix& h) -> Matrix {
    Matrix x = g.multiply(h);
    if (row_scale.size() > 0) return row_scale.asDiagonal() * x;
    return scale == 1.0 ? x : Matrix(x * scale);
  };

  const auto rows = static_cast<Eigen::Index>(n);
  Matrix h = Matrix::Constant(rows, cfg.k, 1.0 / cfg.k);
  Partition previous = Partition::single_class(n);
  int run = 1;
  int k = cfg.k;

  AwlResult result;
  result.assignment = SoftAssignment(h);
  for (int step = 1; step <= cfg.max_steps; ++step) {
    Matrix x = embed(h);
    if (!x.allFinite()) throw Error("approx_wl: non-finite embedding at step " + std::to_string(step));
    const std::uint64_t step_seed = detail::mix_seed(cfg.seed ^ (static_cast<std::uint64_t>(step) << 32));

    SoftAssignment assignment;
    switch (cfg.backend) {
      case Backend::average_linkage:
        assignment = to_soft(cluster_rows_average_linkage(x, k, distance));
        break;
      case Backend::kmeans:
        assignment = to_soft(cluster_rows_kmeans(x, k, step_seed));
        break;
      case Backend::fuzzy_cmeans:
        assignment = cluster_rows_fuzzy_cmeans(x, k, cfg.fuzzifier, step_seed);
        break;
    }
    if (assignment.class_count() == 0) throw Error("approx_wl: backend produced no clusters");
    Partition partition = harden(assignment);
    h = assignment.weights();
    k = static_cast<int>(h.cols());

    run = partition == previous ? run + 1 : 1;
    previous = partition;
    result.trace.push_back({std::move(x), assignment, std::move(partition)});
    result.assignment = std::move(assignment);
    result.steps_run = step;
    if (run >= cfg.stabilization) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace roles
