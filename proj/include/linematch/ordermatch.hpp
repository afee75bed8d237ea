#pragma once

#include <atomic>
#include <optional>
#include <utility>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/feasibility.hpp"

namespace linematch {

/// Counts order recoveries that had to fall back to the enumeration oracle,
/// so completeness of the propagation rules can be studied empirically.
inline std::atomic<long>& fallback_activations() {
  static std::atomic<long> count{0};
  return count;
}

/// The item partition of step 1: extreme positive-plurality items, the
/// anchor agents, and the induced in/out split of the items.
struct Partition {
  int g_ell = -1, g_r = -1;  // extreme items of G_+ (g_ell = smaller id label)
  int a_ell = -1, a_r = -1;  // anchor agents with tops g_ell / g_r
  std::vector<int> g_in;     // item ids, ascending
  std::vector<int> g_out;    // complement, ascending
};

/// Recovered order of the items in G_in; true coordinate order up to
/// reversal, canonicalized so that g_ell precedes g_r.
struct ItemOrder {
  std::vector<int> sequence;
  bool g_ell_first = true;
  bool fallback_used = false;
};

struct RecoverOptions {
  // Inference rules beyond anchor/agent disagreement; disabling both forces
  // the enumeration fallback (used to exercise it in tests).
  bool use_not_between = true;       // outside-the-interval rule
  bool use_side_certificates = true; // strictly-one-side ranking rule
  int fallback_max_items = 8;
  size_t fallback_max_extensions = 100000;
};

/// Restricts each agent's ranking to the positive-plurality items and
/// collects the items ranked last there; at most two can occur (the extremes
/// of G_+). Returns them labeled with the smaller item id as g_ell.
inline std::pair<int, int> identify_extremes(const OrdinalProfile& profile) {
  auto plu = plurality_scores(profile);
  std::vector<char> last_seen(profile.n(), 0);
  for (int a = 0; a < profile.n(); ++a) {
    const auto& r = profile.rankings[a];
    for (auto it = r.rbegin(); it != r.rend(); ++it) {
      if (plu[*it] > 0) {
        last_seen[*it] = 1;
        break;
      }
    }
  }
  std::vector<int> extremes;
  for (int g = 0; g < profile.n(); ++g)
    if (last_seen[g]) extremes.push_back(g);
  if (extremes.size() == 1) return {extremes[0], extremes[0]};
  if (extremes.size() == 2) return {extremes[0], extremes[1]};
  throw inconsistency_error(
      "profile is not line-consistent: more than two extreme items");
}

namespace detail {

inline Partition partition_from_anchors(const OrdinalProfile& profile,
                                        const RankIndex& idx, int g_ell,
                                        int g_r, int a_ell, int a_r) {
  Partition p;
  p.g_ell = g_ell;
  p.g_r = g_r;
  p.a_ell = a_ell;
  p.a_r = a_r;
  const int n = profile.n();
  std::vector<char> in(n, 0);
  if (g_ell != g_r) {
    for (int g = 0; g < n; ++g)
      in[g] = idx.prefers(a_ell, g, g_r) || idx.prefers(a_r, g, g_ell);
  }
  for (int g = 0; g < n; ++g) (in[g] ? p.g_in : p.g_out).push_back(g);
  return p;
}

}  // namespace detail

/// Step 1 with the argmax anchor rule: over all pairs (a_i, a_j) with
/// top(a_i) = g_ell and top(a_j) = g_r, pick a pair maximizing |G_in(a_i,a_j)|
/// (ties by lexicographically smallest pair).
inline Partition build_partition(const OrdinalProfile& profile) {
  auto [g_ell, g_r] = identify_extremes(profile);
  RankIndex idx(profile);
  const int n = profile.n();
  std::vector<int> left_cands, right_cands;
  for (int a = 0; a < n; ++a) {
    if (profile.top(a) == g_ell) left_cands.push_back(a);
    if (profile.top(a) == g_r) right_cands.push_back(a);
  }
  int best_i = left_cands.front(), best_j = right_cands.front(), best_size = -1;
  for (int i : left_cands) {
    for (int j : right_cands) {
      int size = 0;
      if (g_ell != g_r) {
        for (int g = 0; g < n; ++g)
          if (idx.prefers(i, g, g_r) || idx.prefers(j, g, g_ell)) ++size;
      }
      if (size > best_size) {
        best_size = size;
        best_i = i;
        best_j = j;
      }
    }
  }
  return detail::partition_from_anchors(profile, idx, g_ell, g_r, best_i,
                                        best_j);
}

/// Step 1 with caller-supplied anchors instead of the argmax rule.
inline Partition build_partition_with_anchors(const OrdinalProfile& profile,
                                              int a_ell, int a_r) {
  auto [g_ell, g_r] = identify_extremes(profile);
  if (a_ell < 0 || a_ell >= profile.n() || a_r < 0 || a_r >= profile.n())
    throw std::domain_error("anchor agent id out of range");
  if (profile.top(a_ell) != g_ell || profile.top(a_r) != g_r)
    throw std::domain_error("anchor agents must have tops g_ell and g_r");
  RankIndex idx(profile);
  return detail::partition_from_anchors(profile, idx, g_ell, g_r, a_ell, a_r);
}

namespace detail {

// Relation state for the ordering rules. lt = strictly left (positional),
// le = weakly left; both over indices into the g_in list.
struct OrderState {
  int m = 0;
  std::vector<char> lt, le;
  bool changed = false;

  explicit OrderState(int m_) : m(m_), lt(m_ * m_, 0), le(m_ * m_, 0) {}
  bool get_lt(int u, int v) const { return lt[u * m + v]; }
  bool get_le(int u, int v) const { return le[u * m + v]; }

  void add_lt(int u, int v) {
    if (u == v || get_lt(u, v)) return;
    if (get_lt(v, u) || get_le(v, u))
      throw inconsistency_error("contradictory item order facts");
    lt[u * m + v] = 1;
    changed = true;
  }
  void add_le(int u, int v) {
    if (u == v || get_le(u, v) || get_lt(u, v)) return;
    if (get_lt(v, u))
      throw inconsistency_error("contradictory item order facts");
    le[u * m + v] = 1;
    changed = true;
  }
};

// Coincident items are adjacent in every ranking in ascending-id order; the
// clusters of that relation are the only candidates for coincident locations.
inline std::vector<int> ordinal_clusters(const OrdinalProfile& profile,
                                         const RankIndex& idx,
                                         const std::vector<int>& items) {
  const int m = static_cast<int>(items.size());
  std::vector<int> parent(m);
  for (int i = 0; i < m; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      int u = items[i], v = items[j];  // id(u) < id(v)
      bool adjacent = true;
      for (int a = 0; a < profile.n() && adjacent; ++a)
        adjacent = idx.pos[a][v] == idx.pos[a][u] + 1;
      if (adjacent) parent[find(i)] = find(j);
    }
  }
  for (int i = 0; i < m; ++i) parent[i] = find(i);
  return parent;
}

}  // namespace detail

/// Recovers the true coordinate order of G_in (up to reversal, oriented with
/// g_ell first) from ordinal data alone. Propagates disagreement and
/// single-peakedness rules to a fixpoint; residual incomparable pairs go to
/// an enumeration fallback backed by exact linear-inequality feasibility.
inline ItemOrder recover_item_order(const OrdinalProfile& profile,
                                    const Partition& part,
                                    const RecoverOptions& opt = {}) {
  ItemOrder result;
  result.sequence = part.g_in;
  if (part.g_in.size() <= 1) return result;

  const int n = profile.n();
  const int m = static_cast<int>(part.g_in.size());
  RankIndex idx(profile);
  std::vector<int> gin_index(n, -1);
  for (int i = 0; i < m; ++i) gin_index[part.g_in[i]] = i;

  detail::OrderState st(m);

  // R1: anchor disagreement. a_ell lies left of a_r, so when they disagree on
  // a pair, a_ell's choice is the left item.
  for (int u = 0; u < m; ++u) {
    for (int v = u + 1; v < m; ++v) {
      int gu = part.g_in[u], gv = part.g_in[v];
      bool ell_u = idx.prefers(part.a_ell, gu, gv);
      bool r_u = idx.prefers(part.a_r, gu, gv);
      if (ell_u && !r_u)
        st.add_lt(u, v);
      else if (!ell_u && r_u)
        st.add_lt(v, u);
    }
  }

  auto closure = [&] {
    // R3 plus lt/le mixing, to fixpoint.
    bool grew = true;
    while (grew) {
      grew = false;
      for (int u = 0; u < m; ++u) {
        for (int w = 0; w < m; ++w) {
          if (u == w) continue;
          bool lt_uw = st.get_lt(u, w), le_uw = st.get_le(u, w);
          if (!lt_uw && !le_uw) continue;
          for (int v = 0; v < m; ++v) {
            if (v == u || v == w) continue;
            bool lt_wv = st.get_lt(w, v), le_wv = st.get_le(w, v);
            if (!lt_wv && !le_wv) continue;
            if (lt_uw || lt_wv) {
              if (!st.get_lt(u, v)) {
                st.add_lt(u, v);
                grew = true;
              }
            } else if (!st.get_le(u, v)) {
              st.add_le(u, v);
              grew = true;
            }
          }
        }
      }
    }
  };

  st.changed = true;
  while (st.changed) {
    st.changed = false;
    closure();

    // R2: agents whose tops are already strictly ordered are themselves
    // ordered on the line, so their disagreements orient item pairs.
    for (int a = 0; a < n; ++a) {
      int ta = gin_index[profile.top(a)];
      if (ta < 0) continue;
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        int tb = gin_index[profile.top(b)];
        if (tb < 0 || ta == tb || !st.get_lt(ta, tb)) continue;
        for (int u = 0; u < m; ++u) {
          for (int v = u + 1; v < m; ++v) {
            if (st.get_lt(u, v) || st.get_lt(v, u)) continue;
            int gu = part.g_in[u], gv = part.g_in[v];
            bool a_u = idx.prefers(a, gu, gv);
            bool b_u = idx.prefers(b, gu, gv);
            if (a_u && !b_u)
              st.add_lt(u, v);
            else if (!a_u && b_u)
              st.add_lt(v, u);
          }
        }
      }
    }

    // R5: an agent with top t sits strictly left of any item u with
    // lt(t, u) (it is at most the midpoint of t and u), and symmetrically
    // strictly right of any u with lt(u, t). An agent strictly to one side
    // of two items ranks them by position, which orders the pair.
    for (int a = 0; opt.use_side_certificates && a < n; ++a) {
      int ta = gin_index[profile.top(a)];
      if (ta < 0) continue;
      for (int u = 0; u < m; ++u) {
        if (u == ta) continue;
        bool right_u = st.get_lt(ta, u), left_u = st.get_lt(u, ta);
        if (!right_u && !left_u) continue;
        for (int v = u + 1; v < m; ++v) {
          if (v == ta) continue;
          if (st.get_lt(u, v) || st.get_lt(v, u)) continue;
          bool right_v = st.get_lt(ta, v), left_v = st.get_lt(v, ta);
          if (!(right_u && right_v) && !(left_u && left_v)) continue;
          bool prefers_u = idx.prefers(a, part.g_in[u], part.g_in[v]);
          int near = prefers_u ? u : v, far = prefers_u ? v : u;
          int first = right_u ? near : far;  // weakly-left item of the pair
          int second = first == u ? v : u;
          // A preference against the id tie-break certifies distinct
          // positions; with it the fact is strict.
          if (part.g_in[near] > part.g_in[far])
            st.add_lt(first, second);
          else
            st.add_le(first, second);
        }
      }
    }

    // R4: an agent ranking h below both u and v (with u strictly left of v)
    // certifies h is outside the open interval (u, v). Conclusions are weak:
    // the strict and coincident cases are indistinguishable here.
    if (opt.use_not_between) {
      for (int u = 0; u < m; ++u) {
        for (int v = 0; v < m; ++v) {
          if (u == v || !st.get_lt(u, v)) continue;
          int gu = part.g_in[u], gv = part.g_in[v];
          for (int h = 0; h < m; ++h) {
            if (h == u || h == v) continue;
            bool lt_uh = st.get_lt(u, h), lt_hv = st.get_lt(h, v);
            bool want_right = lt_uh && !st.get_le(v, h) && !st.get_lt(v, h);
            bool want_left = lt_hv && !st.get_le(h, u) && !st.get_lt(h, u);
            if (!want_right && !want_left) continue;
            int gh = part.g_in[h];
            bool witnessed = false;
            for (int a = 0; a < n && !witnessed; ++a)
              witnessed =
                  idx.prefers(a, gu, gh) && idx.prefers(a, gv, gh);
            if (!witnessed) continue;
            // The witness ranks h below u and below v, so h coinciding with
            // an endpoint forces the endpoint's id to be smaller; an anti-id
            // endpoint therefore certifies a strict fact.
            if (want_right) {
              if (gv > gh)
                st.add_lt(v, h);
              else
                st.add_le(v, h);
            }
            if (want_left) {
              if (gu > gh)
                st.add_lt(h, u);
              else
                st.add_le(h, u);
            }
          }
        }
      }
    }
  }

  // Resolve every pair. Weak one-way facts resolve positionally: if the
  // pair is genuinely distinct that is the only correct order, and if it is
  // coincident the items are interchangeable anyway.
  std::vector<std::pair<int, int>> unresolved;
  std::vector<char> edge(m * m, 0);  // edge[u][v]: u before v
  for (int u = 0; u < m; ++u) {
    for (int v = u + 1; v < m; ++v) {
      bool uv;
      if (st.get_lt(u, v))
        uv = true;
      else if (st.get_lt(v, u))
        uv = false;
      else if (st.get_le(u, v) && st.get_le(v, u))
        uv = true;  // provably coincident: ascending id (u < v here)
      else if (st.get_le(u, v))
        uv = true;
      else if (st.get_le(v, u))
        uv = false;
      else {
        unresolved.emplace_back(u, v);
        continue;
      }
      edge[(uv ? u : v) * m + (uv ? v : u)] = 1;
    }
  }

  if (!unresolved.empty()) {
    result.fallback_used = true;
    ++fallback_activations();
    std::vector<char> residual(m, 0);
    for (auto [u, v] : unresolved) residual[u] = residual[v] = 1;
    int residual_count = 0;
    for (int i = 0; i < m; ++i) residual_count += residual[i];
    if (residual_count > opt.fallback_max_items)
      throw std::domain_error(
          "order recovery fallback: residual exceeds configured cap");
    auto clusters = detail::ordinal_clusters(profile, idx, part.g_in);

    // Enumerate linear extensions over coincidence clusters and accept the
    // first one realizable by an exact line embedding.
    std::vector<int> reps;  // cluster representatives (indices into g_in)
    std::vector<int> rep_of(m, -1);
    for (int i = 0; i < m; ++i)
      if (clusters[i] == i) reps.push_back(i);
    std::sort(reps.begin(), reps.end(), [&](int a, int b) {
      return part.g_in[a] < part.g_in[b];
    });
    const int R = static_cast<int>(reps.size());
    std::vector<int> rep_slot(m, -1);
    for (int i = 0; i < R; ++i) rep_slot[reps[i]] = i;
    for (int i = 0; i < m; ++i) rep_of[i] = rep_slot[clusters[i]];

    // Partial order on clusters from the established facts.
    std::vector<char> must_before(R * R, 0);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) {
        if (rep_of[u] == rep_of[v]) continue;
        if (st.get_lt(u, v) || st.get_le(u, v))
          must_before[rep_of[u] * R + rep_of[v]] = 1;
      }

    std::vector<std::vector<int>> cluster_members(R);
    for (int i = 0; i < m; ++i) cluster_members[rep_of[i]].push_back(i);
    for (auto& c : cluster_members) {
      // Respect any facts recorded inside a merged cluster; ascending id
      // otherwise (genuinely coincident members are interchangeable).
      std::vector<int> ordered;
      std::vector<char> used(c.size(), 0);
      while (ordered.size() < c.size()) {
        int pick = -1;
        for (size_t i = 0; i < c.size(); ++i) {
          if (used[i]) continue;
          bool blocked = false;
          for (size_t q = 0; q < c.size() && !blocked; ++q)
            if (!used[q] && q != i &&
                (st.get_lt(c[q], c[i]) || st.get_le(c[q], c[i])))
              blocked = true;
          if (!blocked &&
              (pick < 0 || part.g_in[c[i]] < part.g_in[c[pick]]))
            pick = static_cast<int>(i);
        }
        if (pick < 0)  // cyclic weak facts: fall back to id order
          for (size_t i = 0; i < c.size(); ++i) {
            if (!used[i] &&
                (pick < 0 || part.g_in[c[i]] < part.g_in[c[pick]]))
              pick = static_cast<int>(i);
          }
        used[pick] = 1;
        ordered.push_back(c[pick]);
      }
      c = std::move(ordered);
    }

    std::vector<int> seq_reps;
    std::vector<char> placed(R, 0);
    size_t attempts = 0;
    std::optional<std::vector<int>> found;

    auto realizable = [&](const std::vector<int>& rep_seq) {
      const int vars = n + R;
      std::vector<LinearConstraint> cs;
      std::vector<int> slot_of_rep(R, -1);
      for (int t = 0; t < R; ++t) slot_of_rep[rep_seq[t]] = t;
      auto var_item = [&](int gin_idx) { return n + rep_of[gin_idx]; };
      for (int t = 0; t + 1 < R; ++t) {
        LinearConstraint c;  // y_t - y_{t+1} < 0
        c.coef.assign(vars, Rational(0));
        c.coef[n + rep_seq[t]] = 1;
        c.coef[n + rep_seq[t + 1]] = -1;
        c.strict = true;
        cs.push_back(std::move(c));
      }
      for (int a = 0; a < n; ++a) {
        std::vector<int> restricted;
        for (int g : profile.rankings[a])
          if (gin_index[g] >= 0) restricted.push_back(gin_index[g]);
        for (size_t i = 0; i + 1 < restricted.size(); ++i) {
          int u = restricted[i], v = restricted[i + 1];
          if (rep_of[u] == rep_of[v]) continue;
          LinearConstraint c;
          c.coef.assign(vars, Rational(0));
          if (slot_of_rep[rep_of[u]] < slot_of_rep[rep_of[v]]) {
            c.coef[a] = 2;  // 2x_a - y_u - y_v <= 0
            c.coef[var_item(u)] = -1;
            c.coef[var_item(v)] = -1;
          } else {
            c.coef[a] = -2;  // y_u + y_v - 2x_a < 0
            c.coef[var_item(u)] = 1;
            c.coef[var_item(v)] = 1;
            c.strict = true;
          }
          cs.push_back(std::move(c));
        }
      }
      return feasible(std::move(cs), vars);
    };

    auto dfs = [&](auto&& self) -> void {
      if (found || attempts > opt.fallback_max_extensions) return;
      if (static_cast<int>(seq_reps.size()) == R) {
        ++attempts;
        if (realizable(seq_reps)) found = seq_reps;
        return;
      }
      for (int r = 0; r < R; ++r) {
        if (placed[r]) continue;
        bool ok = true;
        for (int q = 0; q < R && ok; ++q)
          if (!placed[q] && q != r && must_before[q * R + r]) ok = false;
        if (!ok) continue;
        placed[r] = 1;
        seq_reps.push_back(r);
        self(self);
        seq_reps.pop_back();
        placed[r] = 0;
        if (found) return;
      }
    };
    dfs(dfs);
    if (!found)
      throw inconsistency_error(
          "order recovery fallback: no realizable extension");

    result.sequence.clear();
    for (int r : *found)
      for (int i : cluster_members[r]) result.sequence.push_back(part.g_in[i]);
    return result;
  }

  // Total resolved tournament: topological extraction.
  std::vector<int> indegree(m, 0);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (edge[u * m + v]) ++indegree[v];
  std::vector<int> seq;
  std::vector<char> used(m, 0);
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int u = 0; u < m; ++u)
      if (!used[u] && indegree[u] == 0) {
        pick = u;
        break;
      }
    if (pick < 0)
      throw inconsistency_error("item order facts form a cycle");
    used[pick] = 1;
    seq.push_back(part.g_in[pick]);
    for (int v = 0; v < m; ++v)
      if (edge[pick * m + v]) --indegree[v];
  }
  result.sequence = std::move(seq);
  return result;
}

/// Full trace of one OrderMatch run (partition, orders, matching).
struct OrderMatchResult {
  Matching matching;
  Partition partition;
  ItemOrder item_order;
  std::vector<int> agent_order;  // pi_a
};

namespace detail {

inline OrderMatchResult match_from_partition(const OrdinalProfile& profile,
                                             Partition part,
                                             const RecoverOptions& opt) {
  const int n = profile.n();
  OrderMatchResult res;
  res.item_order = recover_item_order(profile, part, opt);
  const auto& pi_g = res.item_order.sequence;

  // pi_a: group agents by top item, groups ordered by the top's position in
  // pi_g, ties within a group by ascending agent id.
  std::vector<int> item_pos(n, n);
  for (size_t i = 0; i < pi_g.size(); ++i) item_pos[pi_g[i]] = static_cast<int>(i);
  std::vector<int> pi_a(n);
  std::iota(pi_a.begin(), pi_a.end(), 0);
  std::stable_sort(pi_a.begin(), pi_a.end(), [&](int a, int b) {
    int pa = item_pos[profile.top(a)], pb = item_pos[profile.top(b)];
    if (pa != pb) return pa < pb;
    return a < b;
  });
  res.agent_order = pi_a;

  Matching m;
  m.item_of.assign(n, -1);
  for (size_t i = 0; i < pi_g.size(); ++i) m.item_of[pi_a[i]] = pi_g[i];
  std::vector<int> leftover(pi_a.begin() + pi_g.size(), pi_a.end());
  std::sort(leftover.begin(), leftover.end());
  for (size_t i = 0; i < leftover.size(); ++i)
    m.item_of[leftover[i]] = part.g_out[i];
  res.matching = std::move(m);
  res.partition = std::move(part);
  return res;
}

}  // namespace detail

inline OrderMatchResult order_match_full(const OrdinalProfile& profile,
                                         const RecoverOptions& opt = {}) {
  profile.validate();
  return detail::match_from_partition(profile, build_partition(profile), opt);
}

/// The distortion-3 one-sided matching algorithm.
inline Matching order_match(const OrdinalProfile& profile) {
  return order_match_full(profile).matching;
}

inline OrderMatchResult order_match_naive_full(const OrdinalProfile& profile,
                                               int a_ell, int a_r,
                                               const RecoverOptions& opt = {}) {
  profile.validate();
  return detail::match_from_partition(
      profile, build_partition_with_anchors(profile, a_ell, a_r), opt);
}

/// OrderMatch with caller-chosen anchors instead of the argmax rule; exists
/// to reproduce the tie-break pathologies.
inline Matching order_match_naive(const OrdinalProfile& profile,
                                  std::pair<int, int> anchors) {
  return order_match_naive_full(profile, anchors.first, anchors.second)
      .matching;
}

}  // namespace linematch
