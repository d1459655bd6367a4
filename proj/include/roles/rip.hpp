#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"
#include "roles/wl.hpp"

namespace roles {

/// Role-infused partition model: c communities, each holding the same k
/// roles with n nodes per (community, role) block. Within a community,
/// blocks connect with the role-pair probability omega_role; across
/// communities, with probability p.
///
/// Global node v lives in block v / n; its role is block % k and its
/// community block / k.
struct RipParams {
  double p = 0.0;
  int c = 1;
  int k = 1;
  int n = 1;
  Matrix omega_role = Matrix::Zero(1, 1);
  std::uint64_t seed = 0;

  std::size_t block_count() const { return static_cast<std::size_t>(c) * static_cast<std::size_t>(k); }
  std::size_t total_nodes() const { return block_count() * static_cast<std::size_t>(n); }
  std::size_t block_of(std::size_t v) const { return v / static_cast<std::size_t>(n); }

  void validate() const {
    if (c < 1 || k < 1 || n < 1) throw PreconditionError("RIP parameters: c, k and n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("RIP parameters: p must lie in [0, 1]");
    if (omega_role.rows() != k || omega_role.cols() != k)
      throw PreconditionError("RIP parameters: omega_role must be k x k");
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const double w = omega_role(i, j);
        if (!(w >= 0.0 && w <= 1.0)) throw PreconditionError("RIP parameters: omega_role entries must lie in [0, 1]");
        if (w != omega_role(j, i)) throw PreconditionError("RIP parameters: omega_role must be symmetric");
      }
    }
  }
};

/// Block probability matrix (ck x ck). Roles are indexed modulo k and
/// communities by integer division by k.
inline Matrix build_omega(const RipParams& params) {
  params.validate();
  const auto blocks = static_cast<Eigen::Index>(params.block_count());
  Matrix omega(blocks, blocks);
  for (Eigen::Index a = 0; a < blocks; ++a)
    for (Eigen::Index b = 0; b < blocks; ++b)
      omega(a, b) = a / params.k == b / params.k ? params.omega_role(a % params.k, b % params.k) : params.p;
  return omega;
}

/// E[A] = H_B Omega H_B^T, including within-block self-loop probabilities.
inline Graph expected_adjacency(const RipParams& params) {
  const Matrix omega = build_omega(params);
  const auto total = static_cast<Eigen::Index>(params.total_nodes());
  Matrix a(total, total);
  for (Eigen::Index u = 0; u < total; ++u)
    for (Eigen::Index v = 0; v < total; ++v)
      a(u, v) = omega(u / params.n, v / params.n);
  return Graph::from_dense(a);
}

namespace detail {

inline void accumulate_sample(const RipParams& params, const Matrix& omega, std::uint64_t seed, Matrix& sum) {
  Engine rng(seed);
  const auto total = static_cast<Eigen::Index>(params.total_nodes());
  for (Eigen::Index u = 0; u < total; ++u) {
    for (Eigen::Index v = u; v < total; ++v) {
      if (uniform01(rng) < omega(u / params.n, v / params.n)) {
        sum(u, v) += 1.0;
        if (u != v) sum(v, u) += 1.0;
      }
    }
  }
}

}  // namespace detail

/// One Bernoulli draw of the adjacency matrix, self-loops included. Pairs
/// u <= v are visited row by row, one uniform per pair from mt19937_64
/// seeded with params.seed.
inline Graph sample(const RipParams& params) {
  const Matrix omega = build_omega(params);
  const auto total = static_cast<Eigen::Index>(params.total_nodes());
  Matrix a = Matrix::Zero(total, total);
  detail::accumulate_sample(params, omega, params.seed, a);
  return Graph::from_dense(a);
}

/// Entrywise mean of s independent samples; sample i uses seed params.seed + i.
inline Graph sample_mean(const RipParams& params, int s) {
  if (s < 1) throw PreconditionError("sample_mean: s must be >= 1");
  const Matrix omega = build_omega(params);
  const auto total = static_cast<Eigen::Index>(params.total_nodes());
  Matrix sum = Matrix::Zero(total, total);
  for (int i = 0; i < s; ++i)
    detail::accumulate_sample(params, omega, params.seed + static_cast<std::uint64_t>(i), sum);
  return Graph::from_dense(sum / static_cast<double>(s));
}

inline Partition ground_truth_roles(const RipParams& params) {
  std::vector<int> labels(params.total_nodes());
  for (std::size_t v = 0; v < labels.size(); ++v)
    labels[v] = static_cast<int>(params.block_of(v) % static_cast<std::size_t>(params.k));
  return Partition(labels);
}

inline Partition ground_truth_communities(const RipParams& params) {
  std::vector<int> labels(params.total_nodes());
  for (std::size_t v = 0; v < labels.size(); ++v)
    labels[v] = static_cast<int>(params.block_of(v) / static_cast<std::size_t>(params.k));
  return Partition(labels);
}

/// Symmetric k x k matrix with i.i.d. uniform [0, 1) upper triangle.
inline Matrix random_omega_role(int k, detail::Engine& rng) {
  Matrix omega(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) omega(i, j) = omega(j, i) = detail::uniform01(rng);
  return omega;
}

/// Lower branch W_{-1} of the Lambert W function on [-1/e, 0): the root
/// y <= -1 of y e^y = x. Halley steps inside a shrinking bracket, falling
/// back to bisection whenever a step would leave it.
inline double lambert_w_minus1(double x) {
  const double branch = -std::exp(-1.0);
  if (!(x >= branch && x < 0.0)) throw PreconditionError("lambert_w_minus1: x must lie in [-1/e, 0)");
  if (x == branch) return -1.0;

  auto f = [x](double y) { return y * std::exp(y) - x; };
  // y e^y decreases on (-inf, -1], so f(lo) > 0 >= f(hi).
  double hi = -1.0;
  double lo = -2.0;
  while (f(lo) <= 0.0) lo *= 2.0;

  double y;
  if (x < -0.25) {
    const double q = -std::sqrt(2.0 * (1.0 + std::exp(1.0) * x));
    y = -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q * q * q;
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    y = l1 - l2 + l2 / l1;
  }
  if (!(y > lo && y < hi)) y = 0.5 * (lo + hi);

  for (int it = 0; it < 200; ++it) {
    const double fy = f(y);
    if (std::abs(fy) <= 1e-16 * std::abs(x)) break;
    if (fy > 0.0) lo = y;
    else hi = y;
    const double ey = std::exp(y);
    const double d1 = ey * (y + 1.0);
    double next = y - fy / (d1 - (y + 2.0) * fy / (2.0 * y + 2.0));
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == y || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(y)) {
      y = next;
      break;
    }
    y = next;
  }
  return y;
}

/// Minimal separation delta of the Omega-projected class profiles across
/// the exact WL iterations H^(0..T') on E[A]: for every iteration, the
/// smallest l2 distance between two rows of Omega H^(t') that are not
/// identical. Requires the cEP of E[A] to coincide with the k planted roles.
inline double recovery_delta(const RipParams& params) {
  params.validate();
  // One node per block: WL on the block graph lifts to E[A] unchanged.
  RipParams blocks = params;
  blocks.n = 1;
  const Matrix omega = build_omega(blocks);
  const Graph block_graph = expected_adjacency(blocks);
  const ColoringTrace trace = coarsest_ep(block_graph);
  if (trace.final_partition() != ground_truth_roles(blocks))
    throw PreconditionError("recovery bound: roles are not distinguishable in E[A] (delta = 0)");

  double delta = std::numeric_limits<double>::infinity();
  for (const Partition& p : trace.distinct()) {
    const Matrix profile = omega * indicator(p);
    for (Eigen::Index i = 0; i < profile.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < profile.rows(); ++j) {
        const double d = (profile.row(i) - profile.row(j)).norm();
        if (d > 1e-12) delta = std::min(delta, d);
      }
    }
  }
  if (!std::isfinite(delta)) throw PreconditionError("recovery bound: delta = 0, recovery impossible");
  return delta;
}

/// -9 W_{-1}((q - 1) delta^2 / (9 k^2)) / (2 delta^2): block size n must
/// exceed this for single-sample recovery with probability at least q.
inline double recovery_bound(double delta, int k, double q) {
  if (!(q > 0.0 && q < 1.0)) throw PreconditionError("recovery bound: q must lie in (0, 1)");
  if (!(delta > 0.0)) throw PreconditionError("recovery bound: delta must be positive");
  const double arg = (q - 1.0) * delta * delta / (9.0 * k * k);
  if (arg < -std::exp(-1.0))
    throw PreconditionError("recovery bound: (q - 1) delta^2 / (9 k^2) is below -1/e; bound undefined");
  return -9.0 * lambert_w_minus1(arg) / (2.0 * delta * delta);
}

namespace detail {
inline void require_bound_preconditions(const RipParams& params) {
  if (params.k < 3) throw PreconditionError("recovery bound: requires k >= 3");
}
}  // namespace detail

/// Smallest block size n strictly above the recovery bound.
inline std::int64_t min_n_for_recovery(const RipParams& params, double q) {
  detail::require_bound_preconditions(params);
  const double bound = recovery_bound(recovery_delta(params), params.k, q);
  return static_cast<std::int64_t>(std::floor(bound)) + 1;
}

/// Smallest number of averaged samples s with s > bound / n.
inline std::int64_t min_s_for_recovery(const RipParams& params, double q) {
  detail::require_bound_preconditions(params);
  const double bound = recovery_bound(recovery_delta(params), params.k, q);
  return static_cast<std::int64_t>(std::floor(bound / params.n)) + 1;
}

}  // namespace roles
