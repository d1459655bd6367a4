// role-extract: command-line front end for the roles library.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roles/json_io.hpp"
#include "roles/roles.hpp"

namespace {

using roles::Json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw roles::Error("cannot open \"" + path + "\" for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw roles::Error("cannot open \"" + path + "\" for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw roles::Error("failed writing \"" + path + "\"");
}

roles::Graph load_graph(const std::string& path) {
  auto in = open_input(path);
  try {
    return roles::load_edge_list(in);
  } catch (const roles::ParseError& e) {
    throw roles::Error(path + ": " + e.what());
  }
}

Json load_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw roles::Error(path + ": " + e.what());
  }
}

roles::Partition load_partition(const std::string& path) {
  auto in = open_input(path);
  try {
    return roles::read_partition_csv(in);
  } catch (const roles::ParseError& e) {
    throw roles::Error(path + ": " + e.what());
  }
}

/// "a..b", "a:b" or a single integer.
std::pair<int, int> parse_range(const std::string& text) {
  auto parse = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw roles::PreconditionError("invalid k range \"" + text + "\"");
    return v;
  };
  for (const std::string sep : {"..", ":"}) {
    const auto pos = text.find(sep);
    if (pos != std::string::npos) return {parse(text.substr(0, pos)), parse(text.substr(pos + sep.size()))};
  }
  const int v = parse(text);
  return {v, v};
}

void write_json(const std::optional<std::string>& path, const Json& j) {
  if (!path) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  auto out = open_output(*path);
  out << j.dump(2) << '\n';
  finish_output(out, *path);
}

struct GenRipArgs {
  std::string params;
  std::string out;
  bool expected = false;
};

void cmd_gen_rip(const GenRipArgs& a) {
  const roles::RipParams params = roles::rip_params_from_json(load_json(a.params));
  const roles::Graph g = a.expected ? roles::expected_adjacency(params) : roles::sample(params);
  auto out = open_output(a.out);
  roles::save_edge_list(out, g);
  finish_output(out, a.out);
  const std::string roles_path = a.out + ".labels.csv";
  auto labels = open_output(roles_path);
  roles::write_partition_csv(labels, roles::ground_truth_roles(params));
  finish_output(labels, roles_path);
  const std::string communities_path = a.out + ".communities.csv";
  auto communities = open_output(communities_path);
  roles::write_partition_csv(communities, roles::ground_truth_communities(params));
  finish_output(communities, communities_path);
}

struct ExtractArgs {
  std::string graph;
  std::string method = "cep";
  int k = 2;
  std::string out;
  std::optional<std::string> report;
  std::optional<std::string> trace;
  std::uint64_t seed = 0;
  int max_steps = 30;
  int stabilization = 2;
  double fuzzifier = 2.0;
  std::string normalization = "spectral";
  std::optional<std::string> distance;
  int depth = 20;
};

void cmd_extract(const ExtractArgs& a) {
  const roles::Graph g = load_graph(a.graph);
  const roles::Method method = roles::parse_method(a.method);
  roles::AwlConfig cfg;
  cfg.k = a.k;
  cfg.seed = a.seed;
  cfg.max_steps = a.max_steps;
  cfg.stabilization = a.stabilization;
  cfg.fuzzifier = a.fuzzifier;
  cfg.normalization = roles::parse_normalization(a.normalization);
  if (a.distance) {
    if (*a.distance == "l1") cfg.distance = roles::Distance::l1;
    else if (*a.distance == "l2") cfg.distance = roles::Distance::l2;
    else throw roles::PreconditionError("unknown distance \"" + *a.distance + "\"");
  }

  roles::Partition p;
  std::optional<roles::AwlResult> awl;
  if (method == roles::Method::awl_avg || method == roles::Method::awl_fuzzy) {
    cfg.backend = method == roles::Method::awl_avg ? roles::Backend::average_linkage : roles::Backend::fuzzy_cmeans;
    awl = roles::approx_wl(g, cfg);
    p = awl->partition();
  } else {
    if (method == roles::Method::ev && a.k < 1) throw roles::PreconditionError("--k must be >= 1");
    p = roles::extract_roles(g, method, a.k, a.seed);
  }

  auto out = open_output(a.out);
  roles::write_partition_csv(out, p);
  finish_output(out, a.out);

  Json report{{"method", std::string(roles::to_string(method))},
              {"nodes", g.size()},
              {"classes", p.class_count()},
              {"gamma_ep", roles::to_json(roles::gamma_ep(g, p))}};
  if (g.sparse().nonZeros() > 0) report["gamma_dep"] = roles::to_json(roles::gamma_dep(g, p, a.depth));
  else report["gamma_dep"] = nullptr;
  if (awl) {
    report["steps_run"] = awl->steps_run;
    report["converged"] = awl->converged;
  }
  write_json(a.report, report);

  if (a.trace) {
    if (!awl) throw roles::PreconditionError("--trace is only available for awl methods");
    write_json(a.trace, roles::to_json(*awl));
  }
}

struct Experiment1Args {
  std::string config;
  std::optional<std::string> out;
  bool fixed_omega = false;
  std::optional<int> trials;
};

void cmd_experiment1(const Experiment1Args& a) {
  roles::ExperimentConfig cfg = roles::experiment_config_from_json(load_json(a.config));
  if (a.fixed_omega) cfg.fixed_omega = true;
  if (a.trials) cfg.trials = *a.trials;
  const auto rows = roles::run_experiment1(cfg);
  const std::string path = a.out.value_or((std::filesystem::path(cfg.output_dir) / "experiment1.csv").string());
  auto out = open_output(path);
  roles::write_experiment1_csv(out, rows);
  finish_output(out, path);
}

struct Experiment2Args {
  std::string graph;
  std::string k_range = "2..20";
  std::vector<std::string> methods{"ev", "awl_avg", "awl_fuzzy"};
  int trials = 10;
  std::uint64_t seed = 0;
  bool mean_deviation = false;
  std::string out = "experiment2.csv";
};

void cmd_experiment2(const Experiment2Args& a) {
  const roles::Graph g = load_graph(a.graph);
  roles::ExperimentConfig cfg;
  std::tie(cfg.k_min, cfg.k_max) = parse_range(a.k_range);
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(roles::parse_method(m));
  cfg.trials = a.trials;
  cfg.master_seed = a.seed;
  cfg.mean_deviation = a.mean_deviation;
  const auto rows = roles::run_experiment2(g, cfg);
  auto out = open_output(a.out);
  roles::write_experiment2_csv(out, rows);
  finish_output(out, a.out);
}

struct BoundArgs {
  std::string params;
  double q = 0.9;
  std::optional<std::string> out;
};

void cmd_bound(const BoundArgs& a) {
  const roles::RipParams params = roles::rip_params_from_json(load_json(a.params));
  if (params.k < 3) throw roles::PreconditionError("recovery bound: requires k >= 3");
  const double delta = roles::recovery_delta(params);
  const double bound = roles::recovery_bound(delta, params.k, a.q);
  write_json(a.out, {{"delta", delta},
                     {"q", a.q},
                     {"bound", bound},
                     {"min_n", roles::min_n_for_recovery(params, a.q)},
                     {"min_s", roles::min_s_for_recovery(params, a.q)}});
}

struct EmbedArgs {
  std::string graph;
  int k = 2;
  std::optional<std::string> out;
};

void cmd_embed(const EmbedArgs& a) {
  const roles::Graph g = load_graph(a.graph);
  const roles::EvEmbedding emb = roles::ev_embedding(g, a.k);
  std::ostringstream csv;
  csv << roles::kCsvVersionLine << "\nk";
  for (std::size_t i = 1; i <= emb.sizes.size(); ++i) csv << ",size_" << i;
  for (std::size_t i = 1; i <= emb.centers.size(); ++i) csv << ",center_" << i;
  csv << '\n';
  roles::write_embedding_csv_row(csv, emb);
  if (!a.out) {
    std::cout << csv.str();
    return;
  }
  auto out = open_output(*a.out);
  out << csv.str();
  finish_output(out, *a.out);
}

struct OverlapArgs {
  std::string found;
  std::string truth;
};

void cmd_overlap(const OverlapArgs& a) {
  write_json(std::nullopt, roles::to_json(roles::overlap(load_partition(a.found), load_partition(a.truth))));
}

struct CentralityArgs {
  std::string graph;
  std::optional<std::string> out;
};

void cmd_centrality(const CentralityArgs& a) {
  const roles::Graph g = load_graph(a.graph);
  if (!a.out) {
    roles::write_centrality_csv(std::cout, g);
    return;
  }
  auto out = open_output(*a.out);
  roles::write_centrality_csv(out, g);
  finish_output(out, *a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node role extraction via approximate equitable partitions"};
  app.require_subcommand(1);

  GenRipArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-rip", "Sample a RIP graph (or its expectation) with ground-truth labels");
  gen_cmd->add_option("params", gen.params, "RIP parameter JSON")->required();
  gen_cmd->add_option("out", gen.out, "Output edge list; labels go to <out>.labels.csv")->required();
  gen_cmd->add_flag("--expected", gen.expected, "Write the weighted expected adjacency instead of a sample");

  ExtractArgs ext;
  auto* ext_cmd = app.add_subcommand("extract", "Extract roles and report their costs");
  ext_cmd->add_option("graph", ext.graph, "Edge list")->required();
  ext_cmd->add_option("--method", ext.method, "cep | ev | awl-avg | awl-fuzzy")->capture_default_str();
  ext_cmd->add_option("--k", ext.k, "Number of roles (ignored for cep)")->capture_default_str();
  ext_cmd->add_option("-o,--out", ext.out, "Partition CSV output")->required();
  ext_cmd->add_option("--report", ext.report, "Cost report JSON (default: stdout)");
  ext_cmd->add_option("--trace", ext.trace, "Per-step trace JSON (awl methods)");
  ext_cmd->add_option("--seed", ext.seed, "Random seed")->capture_default_str();
  ext_cmd->add_option("--max-steps", ext.max_steps)->capture_default_str();
  ext_cmd->add_option("--stabilization", ext.stabilization)->capture_default_str();
  ext_cmd->add_option("--fuzzifier", ext.fuzzifier)->capture_default_str();
  ext_cmd->add_option("--normalization", ext.normalization, "spectral | row_stochastic | none")
      ->capture_default_str();
  ext_cmd->add_option("--distance", ext.distance, "l1 | l2 (average linkage)");
  ext_cmd->add_option("--depth", ext.depth, "Depth of the reported gamma_dep")->capture_default_str();

  Experiment1Args e1;
  auto* e1_cmd = app.add_subcommand("experiment1", "Recovery sweep over the number of averaged samples");
  e1_cmd->add_option("config", e1.config, "Experiment config JSON")->required();
  e1_cmd->add_option("-o,--out", e1.out, "Results CSV (default: <output_dir>/experiment1.csv)");
  e1_cmd->add_flag("--fixed-omega", e1.fixed_omega, "Reuse the config's omega_role in every trial");
  e1_cmd->add_option("--trials", e1.trials, "Override the trial count");

  Experiment2Args e2;
  auto* e2_cmd = app.add_subcommand("experiment2", "Cost and centrality deviations across k");
  e2_cmd->add_option("graph", e2.graph, "Edge list")->required();
  e2_cmd->add_option("--k-range", e2.k_range, "a..b")->capture_default_str();
  e2_cmd->add_option("--methods", e2.methods, "Subset of ev, awl_avg, awl_fuzzy")->capture_default_str();
  e2_cmd->add_option("--trials", e2.trials)->capture_default_str();
  e2_cmd->add_option("--seed", e2.seed)->capture_default_str();
  e2_cmd->add_flag("--mean-deviation", e2.mean_deviation, "Divide deviations by the node count");
  e2_cmd->add_option("-o,--out", e2.out, "Results CSV")->capture_default_str();

  BoundArgs bd;
  auto* bd_cmd = app.add_subcommand("bound", "Finite-sample recovery bound for RIP parameters");
  bd_cmd->add_option("params", bd.params, "RIP parameter JSON")->required();
  bd_cmd->add_option("--q", bd.q, "Target recovery probability")->capture_default_str();
  bd_cmd->add_option("-o,--out", bd.out, "Output JSON (default: stdout)");

  EmbedArgs em;
  auto* em_cmd = app.add_subcommand("embed", "Eigenvector cluster embedding of a graph");
  em_cmd->add_option("graph", em.graph, "Edge list")->required();
  em_cmd->add_option("--k", em.k)->capture_default_str();
  em_cmd->add_option("-o,--out", em.out, "Output CSV (default: stdout)");

  OverlapArgs ov;
  auto* ov_cmd = app.add_subcommand("overlap", "Overlap of a partition with a ground truth");
  ov_cmd->add_option("found", ov.found, "Partition CSV")->required();
  ov_cmd->add_option("truth", ov.truth, "Ground-truth partition CSV")->required();

  CentralityArgs ce;
  auto* ce_cmd = app.add_subcommand("centrality", "PageRank, eigenvector, closeness and betweenness per node");
  ce_cmd->add_option("graph", ce.graph, "Edge list")->required();
  ce_cmd->add_option("-o,--out", ce.out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) cmd_gen_rip(gen);
    else if (*ext_cmd) cmd_extract(ext);
    else if (*e1_cmd) cmd_experiment1(e1);
    else if (*e2_cmd) cmd_experiment2(e2);
    else if (*bd_cmd) cmd_bound(bd);
    else if (*em_cmd) cmd_embed(em);
    else if (*ov_cmd) cmd_overlap(ov);
    else if (*ce_cmd) cmd_centrality(ce);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
