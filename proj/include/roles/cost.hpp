#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "roles/error.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"
#include "roles/spectral.hpp"

namespace roles {

/// Entrywise norm applied to the equitability residual.
enum class Norm { l1, l2, l2_squared };

inline std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::l2_squared: return "l2_squared";
  }
  return "?";
}

inline Norm parse_norm(std::string_view name) {
  if (name == "l1") return Norm::l1;
  if (name == "l2") return Norm::l2;
  if (name == "l2_squared") return Norm::l2_squared;
  throw PreconditionError("unknown norm \"" + std::string(name) + "\"");
}

struct CostReport {
  double value = 0.0;
  Norm norm = Norm::l2;
  std::optional<int> depth;               ///< nullopt means d = infinity
  std::optional<double> spectral_radius;  ///< set when the cost rescales by rho(A)
};

namespace detail {

inline double entrywise_norm(const Matrix& r, Norm norm) {
  switch (norm) {
    case Norm::l1: return r.cwiseAbs().sum();
    case Norm::l2: return r.norm();
    case Norm::l2_squared: return r.squaredNorm();
  }
  return 0.0;
}

inline Vector class_mass(const Matrix& h) {
  Vector mass = h.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < mass.size(); ++j)
    if (!(mass(j) > 0.0)) throw PreconditionError("class " + std::to_string(j) + " has zero total membership");
  return mass;
}

/// R = X - H D^{-1} H^T X, the part of X not explained by class means.
inline Matrix ep_residual(const Matrix& x, const Matrix& h, const Vector& mass) {
  const Matrix means = mass.cwiseInverse().asDiagonal() * (h.transpose() * x);
  return x - h * means;
}

}  // namespace detail

/// Short-term cost ||A H - H D^{-1} H^T A H||, where D holds the (possibly
/// fractional) class sizes.
inline CostReport gamma_ep(const Graph& g, const Matrix& h, Norm norm = Norm::l2) {
  if (static_cast<std::size_t>(h.rows()) != g.size()) throw PreconditionError("assignment rows do not match graph");
  const Vector mass = detail::class_mass(h);
  const Matrix r = detail::ep_residual(g.multiply(h), h, mass);
  return {detail::entrywise_norm(r, norm), norm, 1, std::nullopt};
}

inline CostReport gamma_ep(const Graph& g, const Partition& p, Norm norm = Norm::l2) {
  return gamma_ep(g, indicator(p), norm);
}

inline CostReport gamma_ep(const Graph& g, const SoftAssignment& s, Norm norm = Norm::l2) {
  return gamma_ep(g, s.weights(), norm);
}

inline double spectral_radius(const Graph& g) {
  EigenOptions opts;
  opts.check_simple = false;
  return dominant_eigenpair(g, opts).eigenvalue;
}

/// Depth-d cost sum_{t=1..d} rho(A)^{-t} Gamma_EP(A^t, H). The iterate is
/// kept as (A / rho)^t H, so nothing overflows and A^t is never formed.
inline CostReport gamma_dep(const Graph& g, const Matrix& h, int d, Norm norm, double rho) {
  if (d < 1) throw PreconditionError("gamma_dep: depth must be >= 1");
  if (!(rho > 0.0)) throw PreconditionError("gamma_dep: spectral radius must be positive");
  if (static_cast<std::size_t>(h.rows()) != g.size()) throw PreconditionError("assignment rows do not match graph");
  const Vector mass = detail::class_mass(h);
  Matrix x = h;
  double total = 0.0;
  for (int t = 1; t <= d; ++t) {
    x = g.multiply(x) / rho;
    const double term = detail::entrywise_norm(detail::ep_residual(x, h, mass), norm);
    // Gamma_EP is 2-homogeneous in A under the squared norm.
    total += norm == Norm::l2_squared ? std::pow(rho, t) * term : term;
  }
  return {total, norm, d, rho};
}

inline CostReport gamma_dep(const Graph& g, const Matrix& h, int d, Norm norm = Norm::l2) {
  if (g.sparse().nonZeros() == 0) throw PreconditionError("gamma_dep: graph has no edges (rho(A) = 0)");
  return gamma_dep(g, h, d, norm, spectral_radius(g));
}

inline CostReport gamma_dep(const Graph& g, const Partition& p, int d, Norm norm = Norm::l2) {
  return gamma_dep(g, indicator(p), d, norm);
}

inline CostReport gamma_dep(const Graph& g, const SoftAssignment& s, int d, Norm norm = Norm::l2) {
  return gamma_dep(g, s.weights(), d, norm);
}

/// Long-term (d -> infinity) l1 cost from a precomputed eigenpair.
///
/// rho^{-t} A^t tends to u u^T for the unit Perron vector u, so the per-depth
/// term tends to ||(I - H D^{-1} H^T) u u^T H||_1
///   = (sum_i u_i) * sum_i |u_i - mean of u over the class of i|.
/// Requires a simple dominant eigenvalue and no eigenvalue at -rho(A).
inline CostReport gamma_longterm(const Graph& g, const Partition& p, const EigenResult& eig) {
  if (p.size() != g.size()) throw PreconditionError("partition size does not match graph");
  if (!eig.dominant_simple)
    throw NonSimpleDominantError("gamma_longterm: dominant eigenvalue is not simple");
  if (perron_component_bipartite(g, eig.eigenvector))
    throw NonSimpleDominantError("gamma_longterm: -rho(A) is an eigenvalue (bipartite component), limit does not exist");
  const Vector u = eig.eigenvector / eig.eigenvector.norm();
  const Matrix h = indicator(p);
  const Vector mass = detail::class_mass(h);
  const Vector means = mass.cwiseInverse().asDiagonal() * (h.transpose() * u);
  double deviation = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v)
    deviation += std::abs(u(static_cast<Eigen::Index>(v)) - means(p[v]));
  return {u.sum() * deviation, Norm::l1, std::nullopt, eig.eigenvalue};
}

inline CostReport gamma_longterm(const Graph& g, const Partition& p) {
  return gamma_longterm(g, p, dominant_eigenpair(g));
}

}  // namespace roles
