#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "roles/error.hpp"
#include "roles/graph.hpp"

namespace roles {

/// First line of every CSV the library writes.
inline constexpr std::string_view kCsvVersionLine = "# role-extract v1";

/// Hard assignment of n nodes to k non-empty classes.
///
/// Labels are canonical: classes are numbered 0..k-1 in order of their first
/// node, so two partitions inducing the same classes compare equal.
class Partition {
 public:
  Partition() = default;

  /// Accepts arbitrary non-negative labels and relabels them canonically.
  explicit Partition(const std::vector<int>& labels) : labels_(labels.size()) {
    std::vector<int> remap;
    for (std::size_t v = 0; v < labels.size(); ++v) {
      const int l = labels[v];
      if (l < 0) throw PreconditionError("class labels must be non-negative");
      if (static_cast<std::size_t>(l) >= remap.size()) remap.resize(static_cast<std::size_t>(l) + 1, -1);
      if (remap[static_cast<std::size_t>(l)] < 0) remap[static_cast<std::size_t>(l)] = static_cast<int>(k_++);
      labels_[v] = remap[static_cast<std::size_t>(l)];
    }
  }

  static Partition single_class(std::size_t n) { return Partition(std::vector<int>(n, 0)); }

  static Partition singletons(std::size_t n) {
    std::vector<int> labels(n);
    for (std::size_t v = 0; v < n; ++v) labels[v] = static_cast<int>(v);
    return Partition(labels);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t class_count() const noexcept { return k_; }
  int operator[](std::size_t v) const { return labels_[v]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  std::vector<std::size_t> class_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
  }

  /// Members of each class, ascending.
  std::vector<std::vector<std::size_t>> classes() const {
    std::vector<std::vector<std::size_t>> out(k_);
    for (std::size_t v = 0; v < labels_.size(); ++v) out[static_cast<std::size_t>(labels_[v])].push_back(v);
    return out;
  }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> labels_;
  std::size_t k_ = 0;
};

/// Row-stochastic n x k matrix of fractional class memberships.
class SoftAssignment {
 public:
  static constexpr double kRowTolerance = 1e-9;

  SoftAssignment() = default;

  explicit SoftAssignment(Matrix weights) : weights_(std::move(weights)) {
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < weights_.cols(); ++j) {
        const double w = weights_(i, j);
        if (!std::isfinite(w) || w < -kRowTolerance || w > 1.0 + kRowTolerance)
          throw PreconditionError("soft assignment entries must lie in [0, 1]");
        sum += w;
      }
      if (std::abs(sum - 1.0) > kRowTolerance)
        throw PreconditionError("soft assignment row " + std::to_string(i) + " sums to " +
                                std::to_string(sum) + ", expected 1");
    }
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t class_count() const noexcept { return static_cast<std::size_t>(weights_.cols()); }
  const Matrix& weights() const noexcept { return weights_; }

 private:
  Matrix weights_;
};

/// Indicator matrix H with H(v, C(v)) = 1.
inline Matrix indicator(const Partition& p) {
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.class_count()));
  for (std::size_t v = 0; v < p.size(); ++v) h(static_cast<Eigen::Index>(v), p[v]) = 1.0;
  return h;
}

inline SoftAssignment to_soft(const Partition& p) { return SoftAssignment(indicator(p)); }

/// Sums the rows of m per class: returns H^T m.
inline Matrix class_row_sums(const Partition& p, const Matrix& m) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(p.class_count()), m.cols());
  for (std::size_t v = 0; v < p.size(); ++v) out.row(p[v]) += m.row(static_cast<Eigen::Index>(v));
  return out;
}

/// Quotient matrix A^pi = D^{-1} H^T A H: row i is the mean connectivity of a
/// class-i node toward each class.
inline Matrix quotient_matrix(const Graph& g, const Partition& p) {
  if (p.size() != g.size()) throw PreconditionError("partition size does not match graph");
  Matrix q = class_row_sums(p, g.multiply(indicator(p)));
  const auto sizes = p.class_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) q.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(sizes[i]);
  return q;
}

/// True iff every class of `fine` lies inside a single class of `coarse`.
inline bool is_coarsening_of(const Partition& coarse, const Partition& fine) {
  if (coarse.size() != fine.size()) throw PreconditionError("partitions have different sizes");
  std::vector<int> image(fine.class_count(), -1);
  for (std::size_t v = 0; v < fine.size(); ++v) {
    int& target = image[static_cast<std::size_t>(fine[v])];
    if (target < 0) target = coarse[v];
    else if (target != coarse[v]) return false;
  }
  return true;
}

/// Per-row argmax (ties to the lowest class index); classes that receive no
/// node disappear.
inline Partition harden(const SoftAssignment& s) {
  const Matrix& w = s.weights();
  std::vector<int> labels(s.size(), 0);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < w.cols(); ++j)
      if (w(i, j) > w(i, best)) best = j;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return Partition(labels);
}

/// Partition CSV: version line, header "node,class", one row per node.
inline void write_partition_csv(std::ostream& out, const Partition& p) {
  out << kCsvVersionLine << "\nnode,class\n";
  for (std::size_t v = 0; v < p.size(); ++v) out << v << ',' << p[v] << '\n';
}

inline Partition read_partition_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "node,class") throw ParseError(line_no, "expected header \"node,class\"");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected \"node,class\"");
    const auto node = detail::parse_index(std::string_view(line).substr(0, comma));
    const auto cls = detail::parse_index(std::string_view(line).substr(comma + 1));
    if (!node || !cls) throw ParseError(line_no, "node and class must be non-negative integers");
    if (*node != labels.size()) throw ParseError(line_no, "rows must be sorted by node id without gaps");
    labels.push_back(static_cast<int>(*cls));
  }
  if (!header_seen) throw ParseError(0, "missing partition CSV header");
  return Partition(labels);
}

}  // namespace roles
