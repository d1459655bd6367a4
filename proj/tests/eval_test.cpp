#include <algorithm>
#include <numeric>
#include <queue>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace roles;
using namespace testing_support;

namespace {

/// Overlap by trying every assignment of padded classes.
double factorial_overlap(const Partition& found, const Partition& truth) {
  const std::size_t kk = std::max(found.class_count(), truth.class_count());
  const auto sizes = truth.class_sizes();
  std::vector<std::vector<double>> inter(kk, std::vector<double>(kk, 0.0));
  for (std::size_t v = 0; v < truth.size(); ++v)
    inter[static_cast<std::size_t>(truth[v])][static_cast<std::size_t>(found[v])] += 1.0;
  std::vector<std::size_t> perm(kk);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.class_count(); ++i) sum += inter[i][perm[i]] / static_cast<double>(sizes[i]);
    best = std::max(best, sum);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(kk);
}

/// PageRank by iterating the explicit dense Google matrix.
Vector dense_pagerank(const Graph& g, double d) {
  const Matrix a = g.to_dense();
  const auto n = a.rows();
  Matrix m(n, n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const double deg = a.row(v).sum();
    for (Eigen::Index u = 0; u < n; ++u)
      m(u, v) = deg > 0 ? a(v, u) / deg : 1.0 / static_cast<double>(n);
  }
  const Matrix google = d * m + Matrix::Constant(n, n, (1.0 - d) / static_cast<double>(n));
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 5000; ++it) x = google * x;
  return x;
}

std::vector<std::vector<long>> all_pairs_bfs(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<long>> dist(n, std::vector<long>(n, -1));
  const Matrix a = g.to_dense();
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<std::size_t> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) != 0.0 && dist[s][u] < 0) {
          dist[s][u] = dist[s][v] + 1;
          q.push(u);
        }
    }
  }
  return dist;
}

/// Betweenness by counting shortest paths through each node from the
/// all-pairs distance table: sigma(s,t|v) = sigma(s,v) sigma(v,t).
Vector slow_betweenness(const Graph& g) {
  const std::size_t n = g.size();
  const auto dist = all_pairs_bfs(g);
  const Matrix a = g.to_dense();
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return dist[s][x] < dist[s][y]; });
    sigma[s][s] = 1.0;
    for (std::size_t v : order) {
      if (dist[s][v] <= 0) continue;
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) != 0.0 &&
            dist[s][u] == dist[s][v] - 1)
          sigma[s][v] += sigma[s][u];
    }
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      if (dist[s][t] <= 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t || dist[s][v] < 0 || dist[v][t] < 0) continue;
        if (dist[s][v] + dist[v][t] == dist[s][t])
          out(static_cast<Eigen::Index>(v)) += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
  return out;
}

}  // namespace

TEST(Overlap, Examples) {
  const Partition truth(std::vector<int>{0, 0, 1, 1});
  EXPECT_EQ(overlap(Partition(std::vector<int>{1, 1, 0, 0}), truth).value, 1.0);
  EXPECT_EQ(overlap(Partition::single_class(4), truth).value, 0.5);
  EXPECT_EQ(overlap(Partition(std::vector<int>{0, 1, 0, 1}), truth).value, 0.5);
  const OverlapScore s = overlap(Partition::singletons(4), truth);
  EXPECT_EQ(s.value, 0.25);  // two classes matched at 1/2 each, over 4 padded classes
  EXPECT_EQ(s.raw_sum, 1.0);
  EXPECT_THROW(overlap(Partition::singletons(3), truth), PreconditionError);
}

TEST(Overlap, MatchesFactorialSearch) {
  Rng rng(91);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 12));
    const Partition a = random_partition(rng, n, uniform_int(rng, 1, 5));
    const Partition b = random_partition(rng, n, uniform_int(rng, 1, 5));
    const OverlapScore s = overlap(a, b);
    EXPECT_NEAR(s.value, factorial_overlap(a, b), 1e-12);
    EXPECT_GE(s.value, 0.0);
    EXPECT_LE(s.value, 1.0);
  }
}

TEST(Overlap, InvariantUnderRelabeling) {
  Rng rng(92);
  for (int trial = 0; trial < 50; ++trial) {
    const Partition a = random_partition(rng, 15, 4);
    const Partition b = random_partition(rng, 15, 4);
    std::vector<int> shuffled(a.labels());
    const auto perm = random_permutation(rng, a.class_count());
    for (int& l : shuffled) l = static_cast<int>(perm[static_cast<std::size_t>(l)]);
    EXPECT_NEAR(overlap(Partition(shuffled), b).value, overlap(a, b).value, 1e-12);
    EXPECT_EQ(overlap(b, b).value, 1.0);
  }
}

TEST(Centrality, Examples) {
  const Vector k3 = centrality(complete(3), Centrality::pagerank);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(k3(i), 1.0 / 3.0, 1e-9);
  const Vector ev = centrality(complete(3), Centrality::eigenvector);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), 1.0 / 3.0, 1e-9);

  const Vector bc = centrality(star(3), Centrality::betweenness);
  EXPECT_EQ(bc(0), 3.0);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(bc(i), 0.0);

  const Vector cl = centrality(path(3), Centrality::closeness);
  EXPECT_NEAR(cl(0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(cl(1), 1.0);
  EXPECT_NEAR(cl(2), 2.0 / 3.0, 1e-15);

  const Graph empty = Graph::from_dense(Matrix::Zero(3, 3));
  EXPECT_TRUE(centrality(empty, Centrality::eigenvector).isApprox(Vector::Constant(3, 1.0 / 3.0)));
  EXPECT_TRUE(centrality(empty, Centrality::pagerank).isApprox(Vector::Constant(3, 1.0 / 3.0)));
  EXPECT_EQ(centrality(empty, Centrality::closeness), Vector::Zero(3));
}

TEST(Centrality, PagerankMatchesDenseIteration) {
  Rng rng(93);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_graph(rng, 20, 0.15, trial % 2 == 1);
    const Vector pr = centrality(g, Centrality::pagerank);
    EXPECT_LE((pr - dense_pagerank(g, 0.85)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(pr.sum(), 1.0, 1e-12);
  }
}

TEST(Centrality, EigenvectorIsPerronVector) {
  Rng rng(94);
  const Graph g = random_connected_graph(rng, 25, 0.2, true);
  const Vector x = centrality(g, Centrality::eigenvector);
  EXPECT_NEAR(x.sum(), 1.0, 1e-9);
  EXPECT_GT(x.minCoeff(), 0.0);
  const Vector ax = g.multiply(Matrix(x)).col(0);
  EXPECT_LE((ax - symmetric_spectrum(g.to_dense()).maxCoeff() * x).norm(), 1e-7);
}

TEST(Centrality, PathMetricsMatchAllPairsBfs) {
  Rng rng(95);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 1, 150));
    const Graph g = random_graph(rng, n, 3.0 / static_cast<double>(n), false, trial % 3 == 0);
    const auto dist = all_pairs_bfs(g);
    const Vector cl = centrality(g, Centrality::closeness);
    for (std::size_t v = 0; v < n; ++v) {
      long total = 0, reached = 0;
      for (long d : dist[v])
        if (d > 0) {
          total += d;
          ++reached;
        }
      const double expected = total > 0 ? static_cast<double>(reached) / static_cast<double>(total) : 0.0;
      EXPECT_NEAR(cl(static_cast<Eigen::Index>(v)), expected, 1e-12);
    }
    EXPECT_LE((centrality(g, Centrality::betweenness) - slow_betweenness(g)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ClusterDeviation, Examples) {
  Vector x(4);
  x << 1, 3, 5, 5;
  EXPECT_EQ(cluster_deviation(x, Partition(std::vector<int>{0, 0, 1, 1})), 2.0);
  EXPECT_EQ(cluster_deviation(x, Partition::singletons(4)), 0.0);
  EXPECT_EQ(cluster_deviation(x, Partition::single_class(4)), 6.0);
  EXPECT_THROW(cluster_deviation(x, Partition::singletons(3)), PreconditionError);
}

TEST(ClusterDeviation, ZeroOnEquitablePartitionsForEigenvector) {
  // Nodes in one class of an equitable partition share their Perron entry.
  Rng rng(96);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = symmetric_graph(rng, 5, 3, 0.5);
    const Partition cep = coarsest_ep(g).final_partition();
    EXPECT_NEAR(cluster_deviation(centrality(g, Centrality::eigenvector), cep), 0.0, 1e-8);
    EXPECT_NEAR(cluster_deviation(centrality(g, Centrality::pagerank), cep), 0.0, 1e-8);
  }
}

TEST(BruteForce, Examples) {
  const BruteForceResult p3 = brute_force_min_cost(path(3), 2, BruteForceCost::gamma_ep_l2sq, false);
  EXPECT_EQ(p3.partition, Partition(std::vector<int>{0, 1, 0}));
  EXPECT_EQ(p3.cost, 0.0);
  const BruteForceResult one = brute_force_min_cost(path(3), 1, BruteForceCost::gamma_ep_l2sq, false);
  EXPECT_EQ(one.partition, Partition::single_class(3));
  EXPECT_NEAR(one.cost, gamma_ep(path(3), Partition::single_class(3), Norm::l2_squared).value, 1e-15);
  EXPECT_THROW(brute_force_min_cost(path(13), 2, BruteForceCost::gamma_ep_l2sq, false), PreconditionError);
  EXPECT_THROW(brute_force_min_cost(path(3), 4, BruteForceCost::gamma_ep_l2sq, false), PreconditionError);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
  Rng rng(97);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = static_cast<std::size_t>(uniform_int(rng, 2, 7));
    const Graph g = random_connected_graph(rng, n, 0.5, true);
    const int k = uniform_int(rng, 1, static_cast<int>(n));
    for (bool restricted : {false, true}) {
      const Partition cep = coarsest_ep(g).final_partition();
      double best = std::numeric_limits<double>::infinity();
      std::size_t visited = 0;
      for_each_set_partition(n, k, [&](const std::vector<int>& labels) {
        const Partition p(labels);
        ++visited;
        if (restricted && !is_coarsening_of(p, cep)) return;
        best = std::min(best, gamma_ep(g, p, Norm::l2_squared).value);
      });
      const BruteForceResult r = brute_force_min_cost(g, k, BruteForceCost::gamma_ep_l2sq, restricted);
      EXPECT_EQ(r.cost, best);
      EXPECT_LE(r.partition.class_count(), static_cast<std::size_t>(k));
      EXPECT_GT(visited, 0u);
    }
  }
}
