// Shows the query accounting of the two-sided solvers on one instance.

#include <iostream>

#include "linematch/instances.hpp"
#include "linematch/twosided.hpp"

using namespace linematch;

int main() {
  GenSpec spec;
  spec.n = 8;
  spec.seed = 2024;
  spec.coord_min = -50;
  spec.coord_max = 50;
  auto inst = gen_random_two_sided(spec);

  QueryOracle one_sided(inst);
  auto r1 = solve_one_sided_ranks(one_sided);
  std::cout << "one-sided: " << r1.rank_queries << " rank queries (bound "
            << r1.bound << ")\n";

  QueryOracle zero(inst);
  auto r2 = solve_zero_knowledge(zero);
  std::cout << "zero-knowledge: " << r2.rank_queries
            << " rank queries (bound " << r2.bound << ")\n";

  auto exact = two_sided_optimal(taker_profile(inst), giver_profile(inst));
  std::cout << "both matchings optimal: "
            << (r1.matching.item_of == exact.item_of &&
                r2.matching.item_of == exact.item_of
                    ? "yes"
                    : "no")
            << "\n";
  return 0;
}
