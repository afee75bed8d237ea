#pragma once

#include <string>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/optimal.hpp"
#include "linematch/ordermatch.hpp"

namespace linematch {

enum class EdgeKind { forward, backward, internal, inward, other };

inline const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::forward: return "forward";
    case EdgeKind::backward: return "backward";
    case EdgeKind::internal: return "internal";
    case EdgeKind::inward: return "inward";
    default: return "other";
  }
}

/// Functional digraph over agents: edge a_i -> a_j iff M(a_i) = M*(a_j).
/// Node labels need ground truth, so this is an analysis tool only.
///
/// The class labels follow the orientation of the algorithm's recovered item
/// order pi_g (mirroring the line preserves every distance and swaps the
/// forward/backward taxonomy, so the analysis is carried out in the
/// orientation the matching was built in).
struct PermutationGraph {
  static constexpr int kOutLeft = -1;   // A_out^ell
  static constexpr int kOutRight = -2;  // A_out^r

  std::vector<int> head;        // out-edge per agent
  std::vector<int> klass;       // >= 0: position of top(a) in pi_g
  std::vector<int> top;         // top item per agent
  std::vector<int> gin_by_pos;  // G_in items in pi_g order
  Matching mstar;

  int n() const { return static_cast<int>(head.size()); }

  EdgeKind kind(int tail) const {
    int kt = klass[tail], kh = klass[head[tail]];
    if (kt >= 0 && kh >= 0) {
      if (kt < kh) return EdgeKind::forward;
      if (kt > kh) return EdgeKind::backward;
      return EdgeKind::internal;
    }
    if (kt < 0 && kh >= 0) return EdgeKind::inward;
    return EdgeKind::other;
  }

  bool has_kind(EdgeKind k) const {
    for (int a = 0; a < n(); ++a)
      if (kind(a) == k) return true;
    return false;
  }

  /// The matching this graph encodes: M(a) = M*(head(a)).
  Matching matching() const {
    Matching m;
    m.item_of.resize(head.size());
    for (int a = 0; a < n(); ++a) m.item_of[a] = mstar.item_of[head[a]];
    return m;
  }
};

inline Rational edge_cost(const Instance& inst, const PermutationGraph& g,
                          int tail) {
  return dist(inst.agents[tail], inst.items[g.mstar.item_of[g.head[tail]]]);
}

/// SC_k of the graph for every k; equals the cost profile of its matching.
inline std::vector<Rational> graph_cost_profile(const Instance& inst,
                                                const PermutationGraph& g) {
  return cost_profile(inst, g.matching());
}

inline PermutationGraph build_graph(const Instance& inst, const Matching& m) {
  inst.validate();
  m.validate();
  if (m.n() != inst.n()) throw std::domain_error("matching size mismatch");
  PermutationGraph g;

  auto profile = derive_profile(inst);
  auto part = build_partition(profile);
  g.top.resize(inst.n());
  for (int a = 0; a < inst.n(); ++a) g.top[a] = profile.top(a);

  // pi_g fixes the orientation: its first distinct-coordinate step tells us
  // whether the convention mirrors the true line. Everything downstream
  // (M*, class labels, the out-side split) lives in that frame; mirroring
  // is an isometry, so the oriented greedy matching is equally optimal.
  g.gin_by_pos = recover_item_order(profile, part).sequence;
  int sign = 1;
  for (size_t i = 0; i + 1 < g.gin_by_pos.size(); ++i) {
    const auto& a = inst.items[g.gin_by_pos[i]];
    const auto& b = inst.items[g.gin_by_pos[i + 1]];
    if (a != b) {
      sign = a < b ? 1 : -1;
      break;
    }
  }
  auto oriented = [&](int item) {
    return sign > 0 ? inst.items[item] : Rational(-inst.items[item]);
  };

  // Reference matching: rank-for-rank pairing of the agents with the item
  // line in pi_g's frame (out-items on their sides, pi_g in the middle).
  // It differs from the plain greedy only by permutations within coincident
  // clusters, so it is optimal for every k.
  {
    std::vector<char> in_gin(inst.n(), 0);
    for (int x : g.gin_by_pos) in_gin[x] = 1;
    std::vector<int> left_out, right_out;
    for (int x = 0; x < inst.n(); ++x) {
      if (in_gin[x]) continue;
      if (!g.gin_by_pos.empty() && oriented(x) > oriented(g.gin_by_pos.back()))
        right_out.push_back(x);
      else
        left_out.push_back(x);
    }
    auto by_oriented = [&](int x, int y) {
      if (oriented(x) != oriented(y)) return oriented(x) < oriented(y);
      return x < y;
    };
    std::sort(left_out.begin(), left_out.end(), by_oriented);
    std::sort(right_out.begin(), right_out.end(), by_oriented);
    std::vector<int> item_line = left_out;
    item_line.insert(item_line.end(), g.gin_by_pos.begin(),
                     g.gin_by_pos.end());
    item_line.insert(item_line.end(), right_out.begin(), right_out.end());

    std::vector<int> agent_line(inst.n());
    std::iota(agent_line.begin(), agent_line.end(), 0);
    std::sort(agent_line.begin(), agent_line.end(), [&](int x, int y) {
      Rational ox = sign > 0 ? inst.agents[x] : Rational(-inst.agents[x]);
      Rational oy = sign > 0 ? inst.agents[y] : Rational(-inst.agents[y]);
      if (ox != oy) return ox < oy;
      return x < y;
    });
    g.mstar.item_of.assign(inst.n(), -1);
    for (int t = 0; t < inst.n(); ++t)
      g.mstar.item_of[agent_line[t]] = item_line[t];
  }
  auto star_agent_of = g.mstar.agent_of();
  g.head.resize(inst.n());
  for (int a = 0; a < inst.n(); ++a) g.head[a] = star_agent_of[m.item_of[a]];

  std::vector<int> pos_in_gin(inst.n(), -1);
  for (size_t i = 0; i < g.gin_by_pos.size(); ++i)
    pos_in_gin[g.gin_by_pos[i]] = static_cast<int>(i);

  g.klass.assign(inst.n(), PermutationGraph::kOutLeft);
  for (int a = 0; a < inst.n(); ++a) {
    int opt_item = g.mstar.item_of[a];
    if (pos_in_gin[opt_item] >= 0) {
      // a in A_in; its favorite is in G_in whenever G_in is nonempty.
      int x = pos_in_gin[g.top[a]];
      if (x < 0) throw invariant_error("A_in agent with top outside G_in");
      g.klass[a] = x;
    } else if (!g.gin_by_pos.empty() &&
               oriented(opt_item) > oriented(g.gin_by_pos.back())) {
      g.klass[a] = PermutationGraph::kOutRight;
    }
  }
  return g;
}

struct SwapRecord {
  int a1, a2, a3, a4;
  Rational removed_max, added_max, removed_sum, added_sum;
};

struct RemoveForwardResult {
  PermutationGraph graph;
  std::vector<SwapRecord> swaps;
};

/// The reduction of the analysis: repeatedly replaces the rightmost forward
/// edge (and a partner forward/inward edge into the same class) with an
/// internal edge and a longer inward/forward edge, until no forward edge
/// remains. Cost weakly increases; never introduces backward edges.
inline RemoveForwardResult remove_forward_edges(const PermutationGraph& input,
                                                const Instance& inst) {
  if (input.has_kind(EdgeKind::backward))
    throw std::domain_error("remove_forward_edges: graph has backward edges");
  RemoveForwardResult res{input, {}};
  PermutationGraph& g = res.graph;
  const int n = g.n();
  for (int iter = 0; iter <= n; ++iter) {
    // Forward-edge tail whose top is weakly rightmost (largest pi_g class),
    // ties by smallest agent id.
    int a3 = -1;
    for (int a = 0; a < n; ++a) {
      if (g.kind(a) != EdgeKind::forward) continue;
      if (a3 < 0 || g.klass[a] > g.klass[a3]) a3 = a;
    }
    if (a3 < 0) return res;
    if (iter == n)
      throw invariant_error("remove_forward_edges: did not terminate in n iterations");
    int a4 = g.head[a3];
    int a1 = -1;
    for (int a = 0; a < n; ++a) {
      if (a == a3) continue;
      EdgeKind k = g.kind(a);
      if ((k == EdgeKind::forward || k == EdgeKind::inward) &&
          g.klass[g.head[a]] == g.klass[a3]) {
        a1 = a;
        break;  // agents scanned in ascending id
      }
    }
    if (a1 < 0)
      throw invariant_error(
          "remove_forward_edges: no partner edge; graph not from order_match");
    int a2 = g.head[a1];
    SwapRecord rec;
    rec.a1 = a1;
    rec.a2 = a2;
    rec.a3 = a3;
    rec.a4 = a4;
    Rational c12 = edge_cost(inst, g, a1), c34 = edge_cost(inst, g, a3);
    rec.removed_max = std::max(c12, c34);
    rec.removed_sum = c12 + c34;
    g.head[a1] = a4;
    g.head[a3] = a2;
    Rational c14 = edge_cost(inst, g, a1), c32 = edge_cost(inst, g, a3);
    rec.added_max = std::max(c14, c32);
    rec.added_sum = c14 + c32;
    res.swaps.push_back(std::move(rec));
  }
  return res;
}

/// Edges violating d(a_i, M*(a_j)) <= d(a_i, M*(a_i)) + 2 d(a_j, M*(a_j)).
/// Requires a graph without forward or backward edges.
inline std::vector<std::pair<int, int>> check_edge_bound(
    const Instance& inst, const PermutationGraph& g) {
  if (g.has_kind(EdgeKind::forward) || g.has_kind(EdgeKind::backward))
    throw std::domain_error("check_edge_bound: graph has forward/backward edges");
  std::vector<std::pair<int, int>> violations;
  for (int a = 0; a < g.n(); ++a) {
    int b = g.head[a];
    Rational lhs = edge_cost(inst, g, a);
    Rational own = dist(inst.agents[a], inst.items[g.mstar.item_of[a]]);
    Rational other = dist(inst.agents[b], inst.items[g.mstar.item_of[b]]);
    if (lhs > own + 2 * other) violations.emplace_back(a, b);
  }
  return violations;
}

inline std::string to_dot(const PermutationGraph& g) {
  std::string out = "digraph perm {\n";
  for (int a = 0; a < g.n(); ++a) {
    out += "  a" + std::to_string(a + 1) + " -> a" +
           std::to_string(g.head[a] + 1) + " [label=\"" +
           to_string(g.kind(a)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace linematch
