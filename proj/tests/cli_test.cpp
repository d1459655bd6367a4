#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "roles/json_io.hpp"
#include "roles/roles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("role_extract_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  /// Runs the CLI with stdout captured to `stdout_file`; returns the exit code.
  int run(const std::string& args, const std::string& stdout_file = "stdout.txt") const {
    const std::string cmd =
        std::string(ROLE_EXTRACT_BIN) + " " + args + " > " + path(stdout_file) + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out(const std::string& stdout_file = "stdout.txt") const { return read(path(stdout_file)); }

  fs::path dir_;
};

const char* kTwoByThreeParams = R"({"c": 2, "k": 3, "n": 10, "p": 0.1, "seed": 4,
  "omega_role": [[0.9, 0.9, 0.9], [0.9, 0.1, 0.1], [0.9, 0.1, 0.9]]})";

}  // namespace

TEST_F(Cli, GenRipIsByteIdenticalAcrossRuns) {
  write("params.json", kTwoByThreeParams);
  ASSERT_EQ(run("gen-rip " + path("params.json") + " " + path("a.txt")), 0);
  ASSERT_EQ(run("gen-rip " + path("params.json") + " " + path("b.txt")), 0);
  EXPECT_EQ(read(path("a.txt")), read(path("b.txt")));
  EXPECT_FALSE(read(path("a.txt")).empty());

  std::ifstream labels(path("a.txt.labels.csv"));
  EXPECT_EQ(roles::read_partition_csv(labels),
            roles::ground_truth_roles(roles::rip_params_from_json(json::parse(kTwoByThreeParams))));
  std::ifstream graph(path("a.txt"));
  EXPECT_EQ(roles::load_edge_list(graph).size(), 60u);
}

TEST_F(Cli, GenRipEmptyGraphKeepsAllNodes) {
  write("params.json", R"({"c": 1, "k": 2, "n": 3, "p": 0.0, "omega_role": [[0, 0], [0, 0]]})");
  ASSERT_EQ(run("gen-rip " + path("params.json") + " " + path("g.txt")), 0);
  std::ifstream graph(path("g.txt"));
  const roles::Graph g = roles::load_edge_list(graph);
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(g.sparse().nonZeros(), 0);
}

TEST_F(Cli, ExtractRecoversRolesFromExpectation) {
  write("params.json", kTwoByThreeParams);
  ASSERT_EQ(run("gen-rip --expected " + path("params.json") + " " + path("e.txt")), 0);
  ASSERT_EQ(run("extract " + path("e.txt") + " --method awl-avg --k 3 -o " + path("p.csv") + " --trace " +
                path("trace.json")),
            0);
  const json report = json::parse(out());
  EXPECT_EQ(report["classes"], 3);
  EXPECT_EQ(report["nodes"], 60);
  EXPECT_TRUE(report["converged"].get<bool>());
  EXPECT_NEAR(report["gamma_ep"]["value"].get<double>(), 0.0, 1e-9);
  EXPECT_FALSE(json::parse(read(path("trace.json")))["steps"].empty());

  ASSERT_EQ(run("overlap " + path("p.csv") + " " + path("e.txt.labels.csv"), "overlap.json"), 0);
  EXPECT_EQ(json::parse(out("overlap.json"))["value"], 1.0);

  ASSERT_EQ(run("extract " + path("e.txt") + " --method cep -o " + path("cep.csv")), 0);
  EXPECT_EQ(read(path("cep.csv")), read(path("p.csv")));
}

TEST_F(Cli, ExtractIsDeterministic) {
  write("params.json", kTwoByThreeParams);
  ASSERT_EQ(run("gen-rip " + path("params.json") + " " + path("g.txt")), 0);
  for (const char* method : {"ev", "awl-avg", "awl-fuzzy"}) {
    const std::string base = "extract " + path("g.txt") + " --method " + method + " --k 3 --seed 5 -o ";
    ASSERT_EQ(run(base + path("x.csv"), "r1.json"), 0) << out("stderr.txt");
    ASSERT_EQ(run(base + path("y.csv"), "r2.json"), 0);
    EXPECT_EQ(read(path("x.csv")), read(path("y.csv"))) << method;
    EXPECT_EQ(out("r1.json"), out("r2.json")) << method;
  }
}

TEST_F(Cli, Bound) {
  write("params.json", kTwoByThreeParams);
  ASSERT_EQ(run("bound " + path("params.json") + " --q 0.9"), 0);
  const json j = json::parse(out());
  EXPECT_NEAR(j["delta"].get<double>(), 0.8, 1e-12);
  EXPECT_EQ(j["min_n"], 66);
  EXPECT_EQ(j["min_s"], 7);
  EXPECT_GT(j["bound"].get<double>(), 65.0);
  EXPECT_LT(j["bound"].get<double>(), 66.0);
}

TEST_F(Cli, EmbedAndCentrality) {
  write("p3.txt", "0 1\n1 2\n");
  ASSERT_EQ(run("embed " + path("p3.txt") + " --k 2"), 0);
  EXPECT_NE(out().find("k,size_1,size_2,center_1,center_2"), std::string::npos);
  ASSERT_EQ(run("centrality " + path("p3.txt")), 0);
  EXPECT_NE(out().find("node,pagerank,eigenvector,closeness,betweenness"), std::string::npos);
}

TEST_F(Cli, Experiment2WritesCsv) {
  write("p3.txt", "0 1\n1 2\n2 3\n3 0\n");
  ASSERT_EQ(run("experiment2 " + path("p3.txt") + " --k-range 1..3 --trials 2 -o " + path("e2.csv")), 0)
      << out("stderr.txt");
  const std::string csv = read(path("e2.csv"));
  EXPECT_EQ(csv.rfind("# role-extract v1\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2 + 3 * 3);
}

TEST_F(Cli, Experiment1WritesCsv) {
  write("cfg.json", std::string(R"({"rip": )") + kTwoByThreeParams +
                        R"(, "sample_counts": [1, 2], "trials": 2, "methods": ["awl-avg"], "output_dir": ")" +
                        dir_.string() + "\"}");
  ASSERT_EQ(run("experiment1 " + path("cfg.json")), 0) << out("stderr.txt");
  const std::string csv = read(path("experiment1.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST_F(Cli, ErrorsExitNonZero) {
  write("bad.txt", "0 1\n1 x\n");
  EXPECT_EQ(run("extract " + path("bad.txt") + " -o " + path("o.csv")), 1);
  EXPECT_NE(out("stderr.txt").find("line 2"), std::string::npos);
  EXPECT_NE(run("extract " + path("missing.txt") + " -o " + path("o.csv")), 0);
  write("p3.txt", "0 1\n1 2\n");
  EXPECT_EQ(run("extract " + path("p3.txt") + " --method ev --k 0 -o " + path("o.csv")), 1);
  EXPECT_EQ(run("extract " + path("p3.txt") + " --method nope -o " + path("o.csv")), 1);
  EXPECT_NE(run("no-such-command"), 0);
  write("ident.json", R"({"c": 2, "k": 3, "n": 10, "p": 0.1, "omega_role": [[0.5,0.5,0.5],[0.5,0.5,0.5],[0.5,0.5,0.5]]})");
  EXPECT_EQ(run("bound " + path("ident.json") + " --q 0.9"), 1);
}
