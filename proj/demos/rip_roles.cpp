// Plants roles in a RIP graph, then compares how well exact WL, EV clustering
// and approximate WL recover them as more samples are averaged.

#include <cstdio>
#include <initializer_list>

#include "roles/roles.hpp"

int main() {
  roles::RipParams params;
  params.c = 2;
  params.k = 3;
  params.n = 20;
  params.p = 0.1;
  params.seed = 7;
  params.omega_role.resize(3, 3);
  params.omega_role << 0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.9, 0.1, 0.9;

  const roles::Partition truth = roles::ground_truth_roles(params);
  std::printf("RIP graph: %d communities x %d roles x %d nodes, recovery needs n > %lld at q = 0.9\n\n", params.c,
              params.k, params.n, static_cast<long long>(roles::min_n_for_recovery(params, 0.9)));
  std::printf("%8s  %-10s %8s %8s %12s\n", "samples", "method", "classes", "overlap", "gamma_ep");
  for (int s : {1, 4, 16}) {
    const roles::Graph g = roles::sample_mean(params, s);
    for (roles::Method m : {roles::Method::cep, roles::Method::ev, roles::Method::awl_avg}) {
      const roles::Partition p = roles::extract_roles(g, m, params.k, 1);
      std::printf("%8d  %-10s %8zu %8.3f %12.4f\n", s, std::string(roles::to_string(m)).c_str(), p.class_count(),
                  roles::overlap(p, truth).value, roles::gamma_ep(g, p).value);
    }
  }
  return 0;
}
