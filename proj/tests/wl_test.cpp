#include <gtest/gtest.h>

#include "support.hpp"

using namespace roles;
using namespace testing_support;

TEST(CoarsestEp, Examples) {
  EXPECT_EQ(coarsest_ep(cycle(4)).final_partition().class_count(), 1u);
  EXPECT_EQ(coarsest_ep(star(3)).final_partition(), Partition(std::vector<int>{0, 1, 1, 1}));
  EXPECT_EQ(coarsest_ep(path(3)).final_partition(), Partition(std::vector<int>{0, 1, 0}));
}

TEST(CoarsestEp, RipExpectationHasRoleClasses) {
  RipParams params;
  params.c = 2;
  params.k = 3;
  params.n = 10;
  params.p = 0.1;
  params.omega_role.resize(3, 3);
  params.omega_role << 0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.9, 0.1, 0.9;
  const Partition cep = coarsest_ep(expected_adjacency(params)).final_partition();
  EXPECT_EQ(cep, ground_truth_roles(params));
  EXPECT_EQ(cep.class_sizes(), (std::vector<std::size_t>{20, 20, 20}));
}

TEST(CoarsestEp, WeightsMatter) {
  // Same topology as C4 but one pair of opposite edges is heavier: nodes
  // still look alike. Changing a single edge breaks the symmetry.
  Matrix a = cycle(4).to_dense();
  a(0, 1) = a(1, 0) = 2.0;
  a(2, 3) = a(3, 2) = 2.0;
  EXPECT_EQ(coarsest_ep(Graph::from_dense(a)).final_partition().class_count(), 1u);
  a(2, 3) = a(3, 2) = 3.0;
  EXPECT_EQ(coarsest_ep(Graph::from_dense(a)).final_partition().class_count(), 2u);
}

TEST(CoarsestEp, TraceRefinesStrictlyThenRepeats) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_graph(rng, static_cast<std::size_t>(uniform_int(rng, 1, 40)), 0.2);
    const ColoringTrace trace = coarsest_ep(g);
    ASSERT_GE(trace.partitions.size(), 2u);
    for (std::size_t t = 1; t + 1 < trace.partitions.size(); ++t) {
      EXPECT_TRUE(is_coarsening_of(trace.partitions[t - 1], trace.partitions[t]));
      EXPECT_GT(trace.partitions[t].class_count(), trace.partitions[t - 1].class_count());
    }
    EXPECT_EQ(trace.partitions.back(), trace.partitions[trace.partitions.size() - 2]);
    EXPECT_LE(static_cast<std::size_t>(trace.iterations), g.size());
  }
}

TEST(CoarsestEp, OutputIsEquitable) {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const bool weighted = trial % 2 == 1;
    const Graph g = trial % 3 == 0 ? symmetric_graph(rng, 6, 3, 0.4)
                                   : random_graph(rng, static_cast<std::size_t>(uniform_int(rng, 2, 50)), 0.15, weighted);
    const Partition cep = coarsest_ep(g).final_partition();
    EXPECT_TRUE(is_equitable(g, cep, g.weighted() ? 1e-9 : 0.0));
  }
}

TEST(CoarsestEp, PermutationEquivariance) {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = trial % 2 ? symmetric_graph(rng, 8, 4, 0.3)
                              : random_graph(rng, static_cast<std::size_t>(uniform_int(rng, 2, 50)), 0.1, trial % 4 == 0);
    const auto perm = random_permutation(rng, g.size());
    EXPECT_EQ(coarsest_ep(permute(g, perm)).final_partition(), permute(coarsest_ep(g).final_partition(), perm));
  }
}

TEST(CoarsestEp, Idempotent) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = symmetric_graph(rng, 5, 3, 0.5);
    const Partition cep = coarsest_ep(g).final_partition();
    EXPECT_EQ(coarsest_ep(g, cep).final_partition(), cep);
  }
}

TEST(CoarsestEp, RespectsInitialColoring) {
  const Partition seed(std::vector<int>{0, 0, 1, 0});
  const Partition out = coarsest_ep(cycle(4), seed).final_partition();
  EXPECT_TRUE(is_coarsening_of(seed, out));
  EXPECT_TRUE(is_equitable(cycle(4), out, 0.0));
  // Node 2 marked; its neighbors 1, 3 are alike; node 0 is opposite.
  EXPECT_EQ(out, Partition(std::vector<int>{0, 1, 2, 1}));
}

TEST(CoarsestEp, NoStrictlyCoarserEquitablePartition) {
  // Exhaustive search: no equitable partition is strictly coarser than the
  // cEP, and in fact every equitable partition refines it.
  Rng rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 7));
    const Graph g = trial % 3 == 0 ? symmetric_graph(rng, 2, 3, 0.6) : random_graph(rng, n, 0.4);
    const Partition cep = coarsest_ep(g).final_partition();
    for_each_set_partition(g.size(), static_cast<int>(g.size()), [&](const std::vector<int>& labels) {
      const Partition p(labels);
      if (is_equitable(g, p, 0.0)) {
        if (is_coarsening_of(p, cep)) EXPECT_EQ(p, cep);
        EXPECT_TRUE(is_coarsening_of(cep, p));
      }
    });
  }
}

TEST(IsEquitable, Examples) {
  EXPECT_TRUE(is_equitable(path(3), Partition(std::vector<int>{0, 1, 0}), 0.0));
  EXPECT_FALSE(is_equitable(path(3), Partition(std::vector<int>{0, 0, 1}), 0.0));
  Rng rng(1);
  EXPECT_TRUE(is_equitable(random_graph(rng, 10, 0.5, true), Partition::singletons(10), 0.0));
}

TEST(IsEquitable, MatchesEntrywiseDefinition) {
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(rng, 6, 0.5);
    const Partition p = random_partition(rng, 6, 3);
    const Matrix ah = g.multiply(indicator(p));
    bool equitable = true;
    for (std::size_t u = 0; u < 6; ++u)
      for (std::size_t v = 0; v < 6; ++v)
        if (p[u] == p[v] && ah.row(static_cast<Eigen::Index>(u)) != ah.row(static_cast<Eigen::Index>(v)))
          equitable = false;
    EXPECT_EQ(is_equitable(g, p, 0.0), equitable);
  }
}

TEST(IsCepCompatible, Examples) {
  EXPECT_TRUE(is_cep_compatible(cycle(4), Partition::single_class(4)));
  EXPECT_FALSE(is_cep_compatible(star(3), Partition(std::vector<int>{0, 1, 1, 2})));
  Rng rng(37);
  const Graph g = symmetric_graph(rng, 4, 3, 0.5);
  EXPECT_TRUE(is_cep_compatible(g, coarsest_ep(g).final_partition()));
}
