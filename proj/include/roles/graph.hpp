#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iostream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roles/error.hpp"

namespace roles {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Graphs up to this many nodes keep a dense copy of the adjacency matrix.
inline constexpr std::size_t kDefaultDenseThreshold = 2048;

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Weighted undirected graph on nodes 0..n-1 with optional self-loops.
///
/// The adjacency is always held in row-major sparse form (used for neighbor
/// iteration); graphs with at most `dense_threshold` nodes additionally keep
/// a dense matrix that products are routed through. Immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Builds from a square matrix. Throws PreconditionError unless the matrix
  /// is symmetric, finite and entrywise nonnegative.
  static Graph from_dense(const Matrix& adjacency,
                          std::size_t dense_threshold = kDefaultDenseThreshold) {
    if (adjacency.rows() != adjacency.cols())
      throw PreconditionError("adjacency matrix must be square");
    const auto n = static_cast<std::size_t>(adjacency.rows());
    for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
      for (Eigen::Index j = i; j < adjacency.cols(); ++j) {
        const double a = adjacency(i, j);
        if (!std::isfinite(a) || a < 0.0)
          throw PreconditionError("adjacency entries must be finite and nonnegative");
        if (a != adjacency(j, i)) throw PreconditionError("adjacency matrix must be symmetric");
      }
    }
    Graph g;
    g.n_ = n;
    g.sparse_ = adjacency.sparseView(0.0, 0.0);
    g.sparse_.makeCompressed();
    g.finish(dense_threshold);
    return g;
  }

  /// Builds from an undirected edge list; each edge is set symmetrically and
  /// later duplicates overwrite earlier ones.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::size_t dense_threshold = kDefaultDenseThreshold) {
    std::map<std::pair<std::size_t, std::size_t>, double> unique;
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n) throw PreconditionError("edge endpoint out of range");
      if (!std::isfinite(e.weight) || e.weight <= 0.0)
        throw PreconditionError("edge weights must be positive and finite");
      unique[std::minmax(e.u, e.v)] = e.weight;
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * unique.size());
    for (const auto& [uv, w] : unique) {
      const auto u = static_cast<Eigen::Index>(uv.first);
      const auto v = static_cast<Eigen::Index>(uv.second);
      triplets.emplace_back(u, v, w);
      if (u != v) triplets.emplace_back(v, u, w);
    }
    Graph g;
    g.n_ = n;
    g.sparse_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    g.sparse_.setFromTriplets(triplets.begin(), triplets.end());
    g.sparse_.makeCompressed();
    g.finish(dense_threshold);
    return g;
  }

  std::size_t size() const noexcept { return n_; }
  bool weighted() const noexcept { return weighted_; }
  bool is_dense() const noexcept { return dense_.has_value(); }
  const SparseMatrix& sparse() const noexcept { return sparse_; }

  /// Number of undirected edges, self-loops included.
  std::size_t edge_count() const noexcept {
    std::size_t loops = 0;
    for (std::size_t v = 0; v < n_; ++v)
      if (weight(v, v) != 0.0) ++loops;
    return (static_cast<std::size_t>(sparse_.nonZeros()) - loops) / 2 + loops;
  }

  double weight(std::size_t u, std::size_t v) const {
    if (dense_) return (*dense_)(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
    return sparse_.coeff(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
  }

  /// Calls f(neighbor, weight) for every stored entry of row v, in ascending
  /// neighbor order. A self-loop reports v itself.
  template <class F>
  void for_each_neighbor(std::size_t v, F&& f) const {
    for (SparseMatrix::InnerIterator it(sparse_, static_cast<Eigen::Index>(v)); it; ++it)
      f(static_cast<std::size_t>(it.col()), it.value());
  }

  /// A * m.
  Matrix multiply(const Matrix& m) const {
    if (static_cast<std::size_t>(m.rows()) != n_)
      throw PreconditionError("operand has " + std::to_string(m.rows()) + " rows, graph has " +
                              std::to_string(n_) + " nodes");
    if (dense_) return (*dense_) * m;
    return sparse_ * m;
  }

  Matrix to_dense() const {
    if (dense_) return *dense_;
    return Matrix(sparse_);
  }

  /// Canonical edge list: u <= v, ascending by u, with each node's
  /// self-loop emitted after its other edges.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < n_; ++u) {
      std::optional<double> loop;
      for_each_neighbor(u, [&](std::size_t v, double w) {
        if (v > u) out.push_back({u, v, w});
        if (v == u) loop = w;
      });
      if (loop) out.push_back({u, u, *loop});
    }
    return out;
  }

 private:
  void finish(std::size_t dense_threshold) {
    sparse_.prune(0.0, 0.0);
    weighted_ = false;
    for (Eigen::Index k = 0; k < sparse_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(sparse_, k); it; ++it)
        if (it.value() != 1.0) weighted_ = true;
    if (n_ <= dense_threshold) dense_ = Matrix(sparse_);
  }

  std::size_t n_ = 0;
  bool weighted_ = false;
  SparseMatrix sparse_;
  std::optional<Matrix> dense_;
};

struct LoadOptions {
  std::size_t dense_threshold = kDefaultDenseThreshold;
  /// Receives non-fatal diagnostics (e.g. asymmetric input). May be empty.
  std::function<void(std::string_view)> warn = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::optional<double> parse_real(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses the whitespace-separated "u v [w]" edge-list format. Lines starting
/// with '#' are comments, except the directive "# nodes N" which fixes the
/// node count (so trailing isolated nodes survive a save/load round trip).
/// An edge given in both orientations with different weights is symmetrized
/// by the maximum weight, with a warning.
inline Graph load_edge_list(std::istream& in, const LoadOptions& options = {}) {
  std::map<std::pair<std::size_t, std::size_t>, double> directed;
  std::size_t n = 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '#') {
      if (tokens.size() == 3 && tokens[0] == "#" && tokens[1] == "nodes") {
        const auto declared = detail::parse_index(tokens[2]);
        if (!declared) throw ParseError(line_no, "invalid node count directive");
        n = std::max(n, *declared);
      }
      continue;
    }
    if (tokens.size() != 2 && tokens.size() != 3)
      throw ParseError(line_no, "expected \"u v\" or \"u v w\"");
    const auto u = detail::parse_index(tokens[0]);
    const auto v = detail::parse_index(tokens[1]);
    if (!u || !v) throw ParseError(line_no, "node ids must be non-negative integers");
    double w = 1.0;
    if (tokens.size() == 3) {
      const auto parsed = detail::parse_real(tokens[2]);
      if (!parsed || !std::isfinite(*parsed)) throw ParseError(line_no, "invalid weight");
      if (*parsed < 0.0) throw ParseError(line_no, "negative weight");
      if (*parsed == 0.0) throw ParseError(line_no, "weight must be positive");
      w = *parsed;
    }
    directed[{*u, *v}] = w;
    n = std::max(n, std::max(*u, *v) + 1);
  }

  std::vector<Edge> edges;
  edges.reserve(directed.size());
  for (const auto& [uv, w] : directed) {
    const auto [u, v] = uv;
    if (u > v) {
      const auto reverse = directed.find({v, u});
      if (reverse != directed.end()) continue;  // handled from the (v, u) side
      edges.push_back({v, u, w});
      continue;
    }
    double weight = w;
    if (u != v) {
      const auto reverse = directed.find({v, u});
      if (reverse != directed.end() && reverse->second != w) {
        weight = std::max(w, reverse->second);
        if (options.warn)
          options.warn("edge " + std::to_string(u) + "-" + std::to_string(v) +
                       " listed with different weights per direction; using the maximum");
      }
    }
    edges.push_back({u, v, weight});
  }
  return Graph::from_edges(n, edges, options.dense_threshold);
}

/// Writes the canonical edge list (see Graph::edges), preceded by a
/// "# nodes N" directive. Weights are omitted for unweighted graphs.
inline void save_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.size() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (g.weighted()) out << ' ' << detail::format_real(e.weight);
    out << '\n';
  }
}

/// Row sums of the adjacency matrix.
inline Vector degree_vector(const Graph& g) {
  Vector d = Vector::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t v = 0; v < g.size(); ++v)
    g.for_each_neighbor(v, [&](std::size_t, double w) { d(static_cast<Eigen::Index>(v)) += w; });
  return d;
}

/// A^t * m by t successive products; A^t itself is never formed.
inline Matrix matrix_power_apply(const Graph& g, const Matrix& m, int t) {
  if (t < 1) throw PreconditionError("matrix_power_apply requires t >= 1");
  Matrix result = g.multiply(m);
  for (int i = 1; i < t; ++i) result = g.multiply(result);
  return result;
}

}  // namespace roles
