#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "linematch/core.hpp"

namespace linematch {

struct OptResult {
  Matching matching;
  std::vector<Rational> cost_per_k;  // SC_k for k = 1..n
};

inline std::vector<int> sorted_by_position(const std::vector<Rational>& xs) {
  std::vector<int> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (xs[i] != xs[j]) return xs[i] < xs[j];
    return i < j;
  });
  return order;
}

/// The canonical optimal matching M*: sort agents and items by
/// (coordinate, id) and match rank for rank. Minimizes SC_k for every k.
inline OptResult greedy_optimal(const Instance& inst) {
  inst.validate();
  auto agent_order = sorted_by_position(inst.agents);
  auto item_order = sorted_by_position(inst.items);
  Matching m;
  m.item_of.assign(inst.n(), -1);
  for (int t = 0; t < inst.n(); ++t) m.item_of[agent_order[t]] = item_order[t];
  return {m, cost_profile(inst, m)};
}

struct BruteForceResult {
  Matching matching;
  Rational cost;
};

/// Validation oracle: enumerates all n! matchings and returns a minimizer of
/// SC_k (the lexicographically smallest item permutation among minimizers).
/// Refuses n above the limit to guard the factorial blow-up.
inline BruteForceResult brute_force_optimal(const Instance& inst, int k,
                                            int n_limit = 8) {
  inst.validate();
  const int n = inst.n();
  if (n > n_limit) throw std::domain_error("brute force: n above limit");
  if (k < 1 || k > n) throw std::domain_error("k out of range");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BruteForceResult best{Matching{perm}, k_centrum_cost(inst, Matching{perm}, k)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    Rational c = k_centrum_cost(inst, Matching{perm}, k);
    if (c < best.cost) best = {Matching{perm}, c};
  }
  return best;
}

/// Minimum SC_k for every k in one enumeration pass (oracle for sweeps).
inline std::vector<Rational> brute_force_minima(const Instance& inst,
                                                int n_limit = 8) {
  inst.validate();
  const int n = inst.n();
  if (n > n_limit) throw std::domain_error("brute force: n above limit");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Rational> best = cost_profile(inst, Matching{perm});
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto sc = cost_profile(inst, Matching{perm});
    for (int q = 0; q < n; ++q)
      if (sc[q] < best[q]) best[q] = sc[q];
  }
  return best;
}

}  // namespace linematch
