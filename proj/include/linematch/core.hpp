#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "linematch/rational.hpp"

namespace linematch {

/// Raised when an ordinal profile cannot have come from any line embedding.
struct inconsistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an internal structural guarantee is broken (bad caller input
/// to an analysis transform, e.g. a graph that order_match cannot produce).
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// n agents and n items with exact rational coordinates on a line.
/// Coordinates may coincide; ordinal derivation applies a fixed tie-break.
struct Instance {
  std::vector<Rational> agents;
  std::vector<Rational> items;

  int n() const { return static_cast<int>(agents.size()); }

  void validate() const {
    if (agents.size() != items.size())
      throw std::domain_error("instance: agent/item counts differ");
    if (agents.empty()) throw std::domain_error("instance: empty");
  }
};

inline Rational dist(const Rational& a, const Rational& b) {
  return a < b ? Rational(b - a) : Rational(a - b);
}

/// Each agent's strict ranking of the items, best first. Ids are 0-based.
struct OrdinalProfile {
  std::vector<std::vector<int>> rankings;

  int n() const { return static_cast<int>(rankings.size()); }
  int top(int agent) const { return rankings[agent].front(); }

  void validate() const {
    const int m = n();
    if (m == 0) throw std::domain_error("profile: empty");
    std::vector<char> seen;
    for (const auto& r : rankings) {
      if (static_cast<int>(r.size()) != m)
        throw std::domain_error("profile: ranking length != n");
      seen.assign(m, 0);
      for (int g : r) {
        if (g < 0 || g >= m || seen[g])
          throw std::domain_error("profile: ranking is not a permutation");
        seen[g] = 1;
      }
    }
  }
};

/// Bijection agents -> items.
struct Matching {
  std::vector<int> item_of;

  int n() const { return static_cast<int>(item_of.size()); }

  std::vector<int> agent_of() const {
    std::vector<int> inv(item_of.size(), -1);
    for (int a = 0; a < n(); ++a) inv[item_of[a]] = a;
    return inv;
  }

  void validate() const {
    std::vector<char> seen(item_of.size(), 0);
    for (int g : item_of) {
      if (g < 0 || g >= n() || seen[g])
        throw std::domain_error("matching is not a bijection");
      seen[g] = 1;
    }
  }

  bool operator==(const Matching& other) const = default;
};

/// Sorts items by increasing exact distance; equal distances break first by
/// smaller item coordinate, then by smaller item id.
inline OrdinalProfile derive_profile(const Instance& inst) {
  inst.validate();
  const int n = inst.n();
  OrdinalProfile profile;
  profile.rankings.assign(n, {});
  std::vector<int> order(n);
  for (int a = 0; a < n; ++a) {
    std::iota(order.begin(), order.end(), 0);
    std::vector<Rational> d(n);
    for (int g = 0; g < n; ++g) d[g] = dist(inst.agents[a], inst.items[g]);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      if (d[x] != d[y]) return d[x] < d[y];
      if (inst.items[x] != inst.items[y]) return inst.items[x] < inst.items[y];
      return x < y;
    });
    profile.rankings[a] = order;
  }
  return profile;
}

/// d(a, M(a)) per agent.
inline std::vector<Rational> match_distances(const Instance& inst,
                                             const Matching& m) {
  if (m.n() != inst.n()) throw std::domain_error("matching size mismatch");
  std::vector<Rational> d(inst.n());
  for (int a = 0; a < inst.n(); ++a)
    d[a] = dist(inst.agents[a], inst.items[m.item_of[a]]);
  return d;
}

/// Sum of the k largest values (the k-centrum of a cost vector).
inline Rational k_centrum(std::vector<Rational> costs, int k) {
  if (k < 1 || k > static_cast<int>(costs.size()))
    throw std::domain_error("k out of range");
  std::sort(costs.begin(), costs.end(), std::greater<>());
  Rational sum = 0;
  for (int q = 0; q < k; ++q) sum += costs[q];
  return sum;
}

inline Rational k_centrum_cost(const Instance& inst, const Matching& m, int k) {
  return k_centrum(match_distances(inst, m), k);
}

/// SC_k for every k in [n], computed in one pass; nondecreasing in k.
inline std::vector<Rational> cost_profile(const Instance& inst,
                                          const Matching& m) {
  auto d = match_distances(inst, m);
  std::sort(d.begin(), d.end(), std::greater<>());
  std::vector<Rational> sc(d.size());
  Rational acc = 0;
  for (size_t q = 0; q < d.size(); ++q) {
    acc += d[q];
    sc[q] = acc;
  }
  return sc;
}

/// True iff every adjacent pair g above g' in each ranking satisfies
/// d(a,g) <= d(a,g'); exact comparisons throughout.
inline bool check_consistency(const OrdinalProfile& profile,
                              const Instance& inst) {
  if (profile.n() != inst.n()) throw std::domain_error("size mismatch");
  for (int a = 0; a < inst.n(); ++a) {
    const auto& r = profile.rankings[a];
    for (size_t i = 0; i + 1 < r.size(); ++i) {
      if (dist(inst.agents[a], inst.items[r[i]]) >
          dist(inst.agents[a], inst.items[r[i + 1]]))
        return false;
    }
  }
  return true;
}

/// plu(g) for every item.
inline std::vector<int> plurality_scores(const OrdinalProfile& profile) {
  std::vector<int> plu(profile.n(), 0);
  for (int a = 0; a < profile.n(); ++a) ++plu[profile.top(a)];
  return plu;
}

/// O(1) preference lookups: pos[a][g] = position of item g in a's ranking.
struct RankIndex {
  std::vector<std::vector<int>> pos;

  explicit RankIndex(const OrdinalProfile& profile) {
    const int n = profile.n();
    pos.assign(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i) pos[a][profile.rankings[a][i]] = i;
  }

  bool prefers(int agent, int g, int h) const {
    return pos[agent][g] < pos[agent][h];
  }
};

}  // namespace linematch
