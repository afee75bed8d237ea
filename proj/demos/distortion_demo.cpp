// Walks one instance end to end: profile, matching, graph, reduction.

#include <iostream>

#include "linematch/instances.hpp"
#include "linematch/optimal.hpp"
#include "linematch/permgraph.hpp"

using namespace linematch;

int main() {
  auto inst = gen_tiebreak_pathology(6, KMode::kgeq2, Rational(1, 1000));
  auto profile = derive_profile(inst);
  auto full = order_match_full(profile);
  auto opt = greedy_optimal(inst);

  std::cout << "pi_g:";
  for (int g : full.item_order.sequence) std::cout << " g" << g + 1;
  std::cout << "\nmatching vs optimum (ratio per k):\n";
  auto alg = cost_profile(inst, full.matching);
  for (int k = 1; k <= inst.n(); ++k)
    std::cout << "  k=" << k << "  " << to_string(alg[k - 1]) << " / "
              << to_string(opt.cost_per_k[k - 1]) << "\n";

  auto graph = build_graph(inst, full.matching);
  auto rfe = remove_forward_edges(graph, inst);
  std::cout << "swaps applied: " << rfe.swaps.size()
            << ", edge-bound violations: "
            << check_edge_bound(inst, rfe.graph).size() << "\n";
  std::cout << to_dot(rfe.graph);
  return 0;
}
