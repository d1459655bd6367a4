#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "roles/approx_wl.hpp"
#include "roles/cost.hpp"
#include "roles/detail/parallel.hpp"
#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/eval.hpp"
#include "roles/graph.hpp"
#include "roles/partition.hpp"
#include "roles/rip.hpp"
#include "roles/spectral.hpp"
#include "roles/wl.hpp"

namespace roles {

enum class Method { cep, ev, awl_avg, awl_fuzzy };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::cep: return "cep";
    case Method::ev: return "ev";
    case Method::awl_avg: return "awl_avg";
    case Method::awl_fuzzy: return "awl_fuzzy";
  }
  return "?";
}

/// Accepts both "awl_avg" and "awl-avg" spellings.
inline Method parse_method(std::string_view name) {
  std::string s(name);
  for (char& ch : s)
    if (ch == '-') ch = '_';
  if (s == "cep") return Method::cep;
  if (s == "ev") return Method::ev;
  if (s == "awl_avg") return Method::awl_avg;
  if (s == "awl_fuzzy") return Method::awl_fuzzy;
  throw PreconditionError("unknown method \"" + std::string(name) + "\"");
}

/// Hard role assignment by the given method. `k` is ignored for cep; awl
/// settings other than the backend, k and seed come from `base`.
inline Partition extract_roles(const Graph& g, Method method, int k, std::uint64_t seed, const AwlConfig& base = {}) {
  switch (method) {
    case Method::cep:
      return coarsest_ep(g).final_partition();
    case Method::ev:
      return ev_cluster(g, k);
    case Method::awl_avg:
    case Method::awl_fuzzy: {
      AwlConfig cfg = base;
      cfg.k = k;
      cfg.seed = seed;
      cfg.backend = method == Method::awl_avg ? Backend::average_linkage : Backend::fuzzy_cmeans;
      return approx_wl(g, cfg).partition();
    }
  }
  return {};
}

struct ExperimentConfig {
  RipParams rip;
  std::vector<int> sample_counts{1, 4, 16, 64};
  int k_min = 2;
  int k_max = 20;
  int trials = 100;
  std::vector<Method> methods{Method::ev, Method::awl_avg, Method::awl_fuzzy};
  std::string output_dir = ".";
  std::uint64_t master_seed = 0;
  /// Use rip.omega_role in every trial instead of drawing a fresh one.
  bool fixed_omega = false;
  /// Divide centrality deviations by n.
  bool mean_deviation = false;
  int depth = 20;

  void validate() const {
    if (trials < 1) throw PreconditionError("experiment: trials must be >= 1");
    if (methods.empty()) throw PreconditionError("experiment: no methods selected");
    for (Method m : methods)
      if (m == Method::cep) throw PreconditionError("experiment: cep is not a clustering method with a k");
    if (k_min < 1 || k_max < k_min) throw PreconditionError("experiment: invalid k range");
    for (int s : sample_counts)
      if (s < 1) throw PreconditionError("experiment: sample counts must be >= 1");
    if (depth < 1) throw PreconditionError("experiment: depth must be >= 1");
  }
};

/// Mean and sample standard deviation over the finite entries of xs.
struct Summary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();
  int count = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  double sum = 0.0;
  for (double x : xs)
    if (std::isfinite(x)) {
      sum += x;
      ++s.count;
    }
  if (s.count == 0) return s;
  s.mean = sum / s.count;
  double sq = 0.0;
  for (double x : xs)
    if (std::isfinite(x)) sq += (x - s.mean) * (x - s.mean);
  s.stddev = s.count > 1 ? std::sqrt(sq / (s.count - 1)) : 0.0;
  return s;
}

struct Experiment1Row {
  Method method;
  int samples;
  int trials;
  int failures;  ///< trials in which the method raised an error
  Summary longterm;
  Summary shortterm;
  Summary overlap;
};

namespace detail {

struct TrialMetrics {
  double longterm = std::numeric_limits<double>::quiet_NaN();
  double shortterm = std::numeric_limits<double>::quiet_NaN();
  double overlap = std::numeric_limits<double>::quiet_NaN();
};

inline void write_real(std::ostream& out, double x) {
  if (std::isnan(x)) out << "nan";
  else out << format_real(x);
}

}  // namespace detail

/// Recovery experiment on RIP samples. For every trial t (seed master_seed
/// + t) a fresh Omega_role is drawn, then for each s the mean of s samples is
/// clustered by each method into rip.k classes. Sample streams are nested:
/// the graph for s shares its first samples with every smaller s.
///
/// Reported per (method, s): the depth-d l1 cost, the l2 short-term cost and
/// the normalized overlap with the planted roles.
inline std::vector<Experiment1Row> run_experiment1(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.fixed_omega) cfg.rip.validate();
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t ns = cfg.sample_counts.size();
  const std::size_t nm = cfg.methods.size();
  // results[trial][s index][method index]
  std::vector<std::vector<std::vector<detail::TrialMetrics>>> results(
      trials, std::vector<std::vector<detail::TrialMetrics>>(ns, std::vector<detail::TrialMetrics>(nm)));

  detail::parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t trial_seed = cfg.master_seed + t;
    detail::Engine rng(trial_seed);
    RipParams params = cfg.rip;
    if (!cfg.fixed_omega) params.omega_role = random_omega_role(params.k, rng);
    params.seed = detail::mix_seed(trial_seed);
    const Partition truth = ground_truth_roles(params);
    for (std::size_t si = 0; si < ns; ++si) {
      const Graph g = sample_mean(params, cfg.sample_counts[si]);
      for (std::size_t mi = 0; mi < nm; ++mi) {
        auto& out = results[t][si][mi];
        try {
          const Partition p = extract_roles(g, cfg.methods[mi], params.k, detail::mix_seed(trial_seed ^ 0xa5a5u));
          out.overlap = overlap(p, truth).value;
          out.shortterm = gamma_ep(g, p, Norm::l2).value;
          out.longterm = gamma_dep(g, p, cfg.depth, Norm::l1).value;
        } catch (const Error&) {
          out = {};
        }
      }
    }
  });

  std::vector<Experiment1Row> rows;
  for (std::size_t mi = 0; mi < nm; ++mi) {
    for (std::size_t si = 0; si < ns; ++si) {
      std::vector<double> lt, st, ov;
      int failures = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto& m = results[t][si][mi];
        if (std::isnan(m.overlap)) ++failures;
        lt.push_back(m.longterm);
        st.push_back(m.shortterm);
        ov.push_back(m.overlap);
      }
      rows.push_back({cfg.methods[mi], cfg.sample_counts[si], cfg.trials, failures, summarize(lt), summarize(st),
                      summarize(ov)});
    }
  }
  return rows;
}

inline void write_experiment1_csv(std::ostream& out, const std::vector<Experiment1Row>& rows) {
  out << kCsvVersionLine << '\n'
      << "method,samples,trials,failures,longterm_mean,longterm_std,shortterm_mean,shortterm_std,"
         "overlap_mean,overlap_std\n";
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << r.samples << ',' << r.trials << ',' << r.failures;
    for (const Summary* s : {&r.longterm, &r.shortterm, &r.overlap}) {
      out << ',';
      detail::write_real(out, s->mean);
      out << ',';
      detail::write_real(out, s->stddev);
    }
    out << '\n';
  }
}

inline constexpr Centrality kAllCentralities[] = {Centrality::pagerank, Centrality::eigenvector, Centrality::closeness,
                                                  Centrality::betweenness};

struct Experiment2Row {
  Method method;
  int k;
  int trials;
  int failures;
  Summary shortterm;
  /// Deviation of each centrality from its cluster means, in
  /// kAllCentralities order.
  std::vector<Summary> deviation;
};

/// Cluster-count sweep on a fixed graph: for each method and each k in
/// [k_min, min(k_max, n)], mean l2 short-term cost and per-centrality cluster
/// deviations over `trials` runs seeded master_seed + trial.
inline std::vector<Experiment2Row> run_experiment2(const Graph& g, const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (n == 0) throw PreconditionError("experiment2: empty graph");
  std::vector<Vector> centralities;
  for (Centrality c : kAllCentralities) centralities.push_back(centrality(g, c));

  const int k_hi = std::min<int>(cfg.k_max, static_cast<int>(n));
  std::vector<std::pair<Method, int>> cells;
  for (Method m : cfg.methods)
    for (int k = cfg.k_min; k <= k_hi; ++k) cells.emplace_back(m, k);

  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t nc = std::size(kAllCentralities);
  // values[cell][trial][0] is the cost, [1 + c] the deviations.
  std::vector<std::vector<std::vector<double>>> values(
      cells.size(),
      std::vector<std::vector<double>>(trials, std::vector<double>(1 + nc, std::numeric_limits<double>::quiet_NaN())));
  detail::parallel_for(cells.size() * trials, [&](std::size_t job) {
    const std::size_t cell = job / trials;
    const std::size_t t = job % trials;
    const auto [method, k] = cells[cell];
    try {
      const Partition p = extract_roles(g, method, k, detail::mix_seed(cfg.master_seed + t));
      auto& out = values[cell][t];
      out[0] = gamma_ep(g, p, Norm::l2).value;
      for (std::size_t c = 0; c < nc; ++c) {
        double d = cluster_deviation(centralities[c], p);
        if (cfg.mean_deviation) d /= static_cast<double>(n);
        out[1 + c] = d;
      }
    } catch (const Error&) {
    }
  });

  std::vector<Experiment2Row> rows;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    Experiment2Row row{cells[cell].first, cells[cell].second, cfg.trials, 0, {}, {}};
    std::vector<std::vector<double>> columns(1 + nc);
    for (std::size_t t = 0; t < trials; ++t) {
      if (std::isnan(values[cell][t][0])) ++row.failures;
      for (std::size_t c = 0; c <= nc; ++c) columns[c].push_back(values[cell][t][c]);
    }
    row.shortterm = summarize(columns[0]);
    for (std::size_t c = 0; c < nc; ++c) row.deviation.push_back(summarize(columns[1 + c]));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_experiment2_csv(std::ostream& out, const std::vector<Experiment2Row>& rows) {
  out << kCsvVersionLine << '\n' << "method,k,trials,failures,shortterm_mean,shortterm_std";
  for (Centrality c : kAllCentralities) out << ',' << to_string(c) << "_deviation";
  out << '\n';
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << r.k << ',' << r.trials << ',' << r.failures << ',';
    detail::write_real(out, r.shortterm.mean);
    out << ',';
    detail::write_real(out, r.shortterm.stddev);
    for (const auto& d : r.deviation) {
      out << ',';
      detail::write_real(out, d.mean);
    }
    out << '\n';
  }
}

/// node,pagerank,eigenvector,closeness,betweenness
inline void write_centrality_csv(std::ostream& out, const Graph& g) {
  std::vector<Vector> values;
  for (Centrality c : kAllCentralities) values.push_back(centrality(g, c));
  out << kCsvVersionLine << '\n' << "node";
  for (Centrality c : kAllCentralities) out << ',' << to_string(c);
  out << '\n';
  for (std::size_t v = 0; v < g.size(); ++v) {
    out << v;
    for (const Vector& x : values) out << ',' << detail::format_real(x(static_cast<Eigen::Index>(v)));
    out << '\n';
  }
}

}  // namespace roles
