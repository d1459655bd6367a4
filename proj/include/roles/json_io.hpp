#pragma once

// JSON conversions for the CLI. Needs nlohmann/json as <json.hpp>.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include <json.hpp>

#include "roles/approx_wl.hpp"
#include "roles/cost.hpp"
#include "roles/detail/rng.hpp"
#include "roles/error.hpp"
#include "roles/eval.hpp"
#include "roles/experiments.hpp"
#include "roles/rip.hpp"

namespace roles {

using Json = nlohmann::json;

inline Json to_json(const CostReport& r) {
  Json j;
  j["value"] = r.value;
  j["norm"] = std::string(to_string(r.norm));
  j["depth"] = r.depth ? Json(*r.depth) : Json("inf");
  j["spectral_radius"] = r.spectral_radius ? Json(*r.spectral_radius) : Json(nullptr);
  return j;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const RipParams& p) {
  return {{"p", p.p}, {"c", p.c}, {"k", p.k}, {"n", p.n}, {"omega_role", to_json(p.omega_role)}, {"seed", p.seed}};
}

namespace detail {

template <class T>
T json_field(const Json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T json_required(const Json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("missing field \"") + key + "\"");
  return json_field<T>(j, key, T{});
}

}  // namespace detail

/// Reads {"p", "c", "k", "n", "omega_role", "seed"}. When omega_role is
/// absent it is drawn uniformly (symmetric) from the seed.
inline RipParams rip_params_from_json(const Json& j) {
  if (!j.is_object()) throw PreconditionError("RIP parameters must be a JSON object");
  RipParams p;
  p.p = detail::json_required<double>(j, "p");
  p.c = detail::json_required<int>(j, "c");
  p.k = detail::json_required<int>(j, "k");
  p.n = detail::json_required<int>(j, "n");
  p.seed = detail::json_field<std::uint64_t>(j, "seed", 0);
  if (p.k < 1) throw PreconditionError("RIP parameters: k must be >= 1");
  if (j.contains("omega_role")) {
    const Json& rows = j.at("omega_role");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(p.k))
      throw PreconditionError("omega_role must be a k x k array");
    p.omega_role.resize(p.k, p.k);
    for (int r = 0; r < p.k; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(p.k))
        throw PreconditionError("omega_role must be a k x k array");
      for (int c = 0; c < p.k; ++c) {
        if (!row[static_cast<std::size_t>(c)].is_number()) throw PreconditionError("omega_role entries must be numbers");
        p.omega_role(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
    }
  } else {
    detail::Engine rng(p.seed);
    p.omega_role = random_omega_role(p.k, rng);
  }
  p.validate();
  return p;
}

/// Experiment configuration; every field except "rip" has a default.
/// "k_range" is [k_min, k_max].
inline ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw PreconditionError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  if (j.contains("rip")) {
    cfg.rip = rip_params_from_json(j.at("rip"));
  }
  cfg.fixed_omega = detail::json_field(j, "fixed_omega", cfg.fixed_omega);
  cfg.sample_counts = detail::json_field(j, "sample_counts", cfg.sample_counts);
  if (j.contains("k_range")) {
    const auto range = detail::json_field<std::vector<int>>(j, "k_range", {});
    if (range.size() != 2) throw PreconditionError("k_range must be [k_min, k_max]");
    cfg.k_min = range[0];
    cfg.k_max = range[1];
  }
  cfg.trials = detail::json_field(j, "trials", cfg.trials);
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : detail::json_field<std::vector<std::string>>(j, "methods", {}))
      cfg.methods.push_back(parse_method(name));
  }
  cfg.output_dir = detail::json_field(j, "output_dir", cfg.output_dir);
  cfg.master_seed = detail::json_field(j, "master_seed", cfg.master_seed);
  cfg.mean_deviation = detail::json_field(j, "mean_deviation", cfg.mean_deviation);
  cfg.depth = detail::json_field(j, "depth", cfg.depth);
  cfg.validate();
  return cfg;
}

inline Json to_json(const ExperimentConfig& cfg) {
  Json methods = Json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  return {{"rip", to_json(cfg.rip)},         {"sample_counts", cfg.sample_counts},
          {"k_range", {cfg.k_min, cfg.k_max}}, {"trials", cfg.trials},
          {"methods", methods},                {"output_dir", cfg.output_dir},
          {"master_seed", cfg.master_seed},    {"fixed_omega", cfg.fixed_omega},
          {"mean_deviation", cfg.mean_deviation}, {"depth", cfg.depth}};
}

inline Json to_json(const OverlapScore& s) {
  return {{"value", s.value}, {"raw_sum", s.raw_sum}, {"permutation", s.permutation}};
}

namespace detail {

/// FNV-1a over the raw bytes of the matrix entries (column-major).
inline std::uint64_t fnv1a(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    unsigned char bytes[sizeof(double)];
    const double x = m.data()[i];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace detail

/// Per-step record of an approximate WL run. Embeddings are summarized by a
/// checksum so traces of large graphs stay small.
inline Json to_json(const AwlResult& r) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const AwlStep& s = r.trace[i];
    char checksum[17];
    std::snprintf(checksum, sizeof checksum, "%016llx", static_cast<unsigned long long>(detail::fnv1a(s.embedding)));
    steps.push_back({{"step", i + 1},
                     {"classes", s.partition.class_count()},
                     {"labels", s.partition.labels()},
                     {"embedding_checksum", checksum}});
  }
  return {{"steps_run", r.steps_run}, {"converged", r.converged}, {"steps", steps}};
}

}  // namespace roles
