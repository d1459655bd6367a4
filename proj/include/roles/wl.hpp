#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "roles/graph.hpp"
#include "roles/partition.hpp"

namespace roles {

/// Partitions produced by color refinement, starting with the initial
/// coloring. Every step strictly refines the previous one except the last,
/// which repeats its predecessor and certifies the fixpoint.
struct ColoringTrace {
  std::vector<Partition> partitions;
  int iterations = 0;

  const Partition& final_partition() const { return partitions.back(); }

  /// The partitions without the closing repetition: H^(0), ..., H^(T').
  std::vector<Partition> distinct() const {
    return {partitions.begin(), partitions.end() - (partitions.size() > 1 ? 1 : 0)};
  }
};

namespace detail {

// Weighted class sums are compared after rounding to 12 significant digits,
// so sums accumulated in different orders still collide.
inline std::pair<int, long long> rounded_key(double x) {
  if (x == 0.0) return {0, 0};
  int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
  long long mantissa = std::llround(x / std::pow(10.0, exponent - 11));
  if (std::llabs(mantissa) >= 1'000'000'000'000LL) {
    mantissa = std::llround(static_cast<double>(mantissa) / 10.0);
    ++exponent;
  }
  return {exponent, mantissa};
}

}  // namespace detail

/// Coarsest equitable partition refining `initial` (default: one class) by
/// Weisfeiler-Leman color refinement.
///
/// The signature of v is (current class of v, weight sums from v toward every
/// class). Distinct signatures are re-indexed through an ordered dictionary,
/// which makes the "hash" injective by construction.
inline ColoringTrace coarsest_ep(const Graph& g, const std::optional<Partition>& initial = std::nullopt) {
  const std::size_t n = g.size();
  if (initial && initial->size() != n) throw PreconditionError("initial partition size does not match graph");

  using Key = std::pair<int, long long>;
  using Signature = std::pair<int, std::vector<std::pair<int, Key>>>;

  ColoringTrace trace;
  trace.partitions.push_back(initial ? *initial : Partition::single_class(n));

  std::vector<double> sums;
  std::vector<int> touched;
  for (;;) {
    const Partition& current = trace.partitions.back();
    sums.assign(current.class_count(), 0.0);
    std::map<Signature, int> ids;
    std::vector<int> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      touched.clear();
      g.for_each_neighbor(v, [&](std::size_t u, double w) {
        const int c = current[u];
        if (sums[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        sums[static_cast<std::size_t>(c)] += w;
      });
      std::sort(touched.begin(), touched.end());
      Signature sig{current[v], {}};
      sig.second.reserve(touched.size());
      for (int c : touched) {
        sig.second.emplace_back(c, detail::rounded_key(sums[static_cast<std::size_t>(c)]));
        sums[static_cast<std::size_t>(c)] = 0.0;
      }
      const auto [it, inserted] = ids.try_emplace(std::move(sig), static_cast<int>(ids.size()));
      next[v] = it->second;
    }
    Partition refined(next);
    ++trace.iterations;
    const bool fixpoint = refined.class_count() == current.class_count();
    trace.partitions.push_back(std::move(refined));
    if (fixpoint) break;
  }
  return trace;
}

/// True iff, for every pair of classes (i, j), all nodes of class i have
/// weight sums toward class j within `tol` of each other.
inline bool is_equitable(const Graph& g, const Partition& p, double tol) {
  if (p.size() != g.size()) throw PreconditionError("partition size does not match graph");
  const Matrix ah = g.multiply(indicator(p));
  const auto k = static_cast<Eigen::Index>(p.class_count());
  if (k == 0) return true;
  Matrix lo = Matrix::Constant(k, k, std::numeric_limits<double>::infinity());
  Matrix hi = Matrix::Constant(k, k, -std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < p.size(); ++v) {
    const auto row = ah.row(static_cast<Eigen::Index>(v));
    lo.row(p[v]) = lo.row(p[v]).cwiseMin(row);
    hi.row(p[v]) = hi.row(p[v]).cwiseMax(row);
  }
  return ((hi - lo).maxCoeff()) <= tol;
}

/// True iff p never separates two nodes that share a class of the cEP.
inline bool is_cep_compatible(const Graph& g, const Partition& p) {
  return is_coarsening_of(p, coarsest_ep(g).final_partition());
}

}  // namespace roles
