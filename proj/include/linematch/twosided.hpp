#pragma once

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "linematch/core.hpp"
#include "linematch/optimal.hpp"

namespace linematch {

/// n takers and n givers on a line; both sides rank the other side.
struct TwoSidedInstance {
  std::vector<Rational> takers;
  std::vector<Rational> givers;

  int n() const { return static_cast<int>(takers.size()); }

  void validate() const {
    if (takers.size() != givers.size())
      throw std::domain_error("two-sided instance: side sizes differ");
    if (takers.empty()) throw std::domain_error("two-sided instance: empty");
  }

  Instance as_instance() const { return Instance{takers, givers}; }
};

inline OrdinalProfile taker_profile(const TwoSidedInstance& inst) {
  return derive_profile(Instance{inst.takers, inst.givers});
}

inline OrdinalProfile giver_profile(const TwoSidedInstance& inst) {
  return derive_profile(Instance{inst.givers, inst.takers});
}

/// Order of one side's agents; true coordinate order up to reversal.
struct SideOrder {
  std::vector<int> order;
};

namespace detail {

inline std::vector<int> bottom_set(const OrdinalProfile& profile) {
  std::set<int> bottoms;
  for (const auto& r : profile.rankings) bottoms.insert(r.back());
  return {bottoms.begin(), bottoms.end()};
}

inline std::vector<int> restrict_to(const std::vector<int>& ranking,
                                    const std::vector<char>& member) {
  std::vector<int> out;
  for (int x : ranking)
    if (member[x]) out.push_back(x);
  return out;
}

}  // namespace detail

/// Recovers the true relative order of side X. `side_over_other` is X's
/// profile (used to locate the extreme members of the other side at the
/// bottoms of X's rankings); `other_over_side` supplies the sort keys.
inline SideOrder recover_side_order(const OrdinalProfile& side_over_other,
                                    const OrdinalProfile& other_over_side) {
  const int n = side_over_other.n();
  if (n != other_over_side.n()) throw std::domain_error("profile size mismatch");
  if (n == 1) return {{0}};
  auto bottoms = detail::bottom_set(side_over_other);
  if (bottoms.size() == 1) {
    // All of X lies on one side of the common bottom b, so b's ranking of X
    // is the true order.
    return {other_over_side.rankings[bottoms[0]]};
  }
  if (bottoms.size() != 2)
    throw inconsistency_error("more than two bottom choices across one side");
  int b_ell = bottoms[0], b_r = bottoms[1];
  std::vector<char> tops_bell(n, 0);
  for (int a = 0; a < n; ++a)
    if (side_over_other.top(a) == b_ell) tops_bell[a] = 1;
  // X^{b_ell} sits left of the rest (frame: b_ell left). b_r sorts it from
  // the right, b_ell sorts the remainder from the left.
  auto left_block =
      detail::restrict_to(other_over_side.rankings[b_r], tops_bell);
  std::reverse(left_block.begin(), left_block.end());
  for (int a = 0; a < n; ++a) tops_bell[a] = !tops_bell[a];
  auto right_block =
      detail::restrict_to(other_over_side.rankings[b_ell], tops_bell);
  left_block.insert(left_block.end(), right_block.begin(), right_block.end());
  return {std::move(left_block)};
}

namespace detail {

// Orient `order` so that `anchor` lands at the front/back; the anchor is an
// extreme agent, so anything else certifies an inconsistent profile.
inline void orient(std::vector<int>& order, int anchor, bool at_front) {
  if (order.empty()) return;
  int pos_front = order.front(), pos_back = order.back();
  if ((at_front && pos_front == anchor) || (!at_front && pos_back == anchor))
    return;
  if ((at_front && pos_back == anchor) || (!at_front && pos_front == anchor)) {
    std::reverse(order.begin(), order.end());
    return;
  }
  throw inconsistency_error("orientation anchor is not an extreme agent");
}

}  // namespace detail

/// Exact two-sided optimum from ordinal data alone: recover both side
/// orders, orient them consistently, match rank for rank (distortion 1).
inline Matching two_sided_optimal(const OrdinalProfile& takers_over_givers,
                                  const OrdinalProfile& givers_over_takers) {
  const int n = takers_over_givers.n();
  if (n == 1) return Matching{{0}};
  auto taker_order =
      recover_side_order(takers_over_givers, givers_over_takers).order;
  auto giver_order =
      recover_side_order(givers_over_takers, takers_over_givers).order;

  auto taker_bottoms = detail::bottom_set(takers_over_givers);
  auto giver_bottoms = detail::bottom_set(givers_over_takers);
  if (taker_bottoms.size() == 2) {
    // The extreme taker's least-preferred giver is the opposite extreme.
    int a = taker_order.back();
    detail::orient(giver_order, takers_over_givers.rankings[a].back(), true);
  } else if (giver_bottoms.size() == 2) {
    int g = giver_order.back();
    detail::orient(taker_order, givers_over_takers.rankings[g].back(), true);
  } else {
    // Both sides agree on a single bottom: the givers' common bottom taker
    // and the takers' common bottom giver sit at opposite global extremes.
    detail::orient(taker_order, giver_bottoms[0], true);
    detail::orient(giver_order, taker_bottoms[0], false);
  }

  Matching m;
  m.item_of.assign(n, -1);
  for (int i = 0; i < n; ++i) m.item_of[taker_order[i]] = giver_order[i];
  m.validate();
  return m;
}

/// Query-counting gateway to a hidden two-sided instance. Counts distinct
/// rank queries (agent, t) and distinct full-preference queries; repeats of
/// an already-answered query are free.
class QueryOracle {
 public:
  enum class Side { takers, givers };

  explicit QueryOracle(TwoSidedInstance inst)
      : inst_(std::move(inst)),
        taker_prefs_(taker_profile(inst_)),
        giver_prefs_(giver_profile(inst_)) {}

  int n() const { return inst_.n(); }

  /// The t-th preferred agent on the other side (t is 1-based).
  int rank(Side side, int agent, int t) {
    if (t < 1 || t > n()) throw std::domain_error("rank query: t out of range");
    if (agent < 0 || agent >= n())
      throw std::domain_error("rank query: agent out of range");
    if (asked_rank_.insert({static_cast<int>(side), agent, t}).second)
      ++rank_queries_;
    return profile(side).rankings[agent][t - 1];
  }

  const std::vector<int>& full(Side side, int agent) {
    if (agent < 0 || agent >= n())
      throw std::domain_error("full query: agent out of range");
    if (asked_full_.insert({static_cast<int>(side), agent}).second)
      ++full_queries_;
    return profile(side).rankings[agent];
  }

  /// One-sided prior: the takers' complete profile, free of charge.
  const OrdinalProfile& free_taker_profile() const { return taker_prefs_; }

  long rank_queries() const { return rank_queries_; }
  long full_queries() const { return full_queries_; }

  const TwoSidedInstance& instance() const { return inst_; }

 private:
  const OrdinalProfile& profile(Side side) const {
    return side == Side::takers ? taker_prefs_ : giver_prefs_;
  }

  TwoSidedInstance inst_;
  OrdinalProfile taker_prefs_, giver_prefs_;
  std::set<std::tuple<int, int, int>> asked_rank_;
  std::set<std::pair<int, int>> asked_full_;
  long rank_queries_ = 0;
  long full_queries_ = 0;
};

struct SolveResult {
  Matching matching;
  long rank_queries = 0;
  long full_queries = 0;
  long bound = 0;
  bool within_bound = true;
  bool single_bottom = false;  // one-sided solver: which proof case ran
};

namespace detail {

// Full ranking of one agent assembled from rank queries t = 1..n-1 (the last
// entry is inferred; cached repeats are free).
inline std::vector<int> full_via_ranks(QueryOracle& oracle,
                                       QueryOracle::Side side, int agent) {
  const int n = oracle.n();
  std::vector<int> r;
  std::vector<char> seen(n, 0);
  for (int t = 1; t <= n - 1; ++t) {
    int x = oracle.rank(side, agent, t);
    r.push_back(x);
    seen[x] = 1;
  }
  for (int x = 0; x < n; ++x)
    if (!seen[x]) r.push_back(x);
  return r;
}

// Order the givers left-to-right in the frame where `a` is the rightmost
// taker: givers not topping `a` sit left of it (sorted by a's ranking,
// reversed), givers topping `a` sit rightmost (sorted by any other taker).
inline std::vector<int> giver_order_via_extreme_taker(
    const std::vector<int>& ranking_of_a, const std::vector<int>& ranking_of_a2,
    const std::vector<char>& tops_a) {
  auto right_block = restrict_to(ranking_of_a2, tops_a);
  std::vector<char> rest(tops_a.size());
  for (size_t i = 0; i < rest.size(); ++i) rest[i] = !tops_a[i];
  auto left_block = restrict_to(ranking_of_a, rest);
  std::reverse(left_block.begin(), left_block.end());
  left_block.insert(left_block.end(), right_block.begin(), right_block.end());
  return left_block;
}

}  // namespace detail

/// One-sided setting (takers' profile known): optimal matching with at most
/// 3n-4 rank queries, or 2n-2 when the takers share a single bottom giver.
inline SolveResult solve_one_sided_ranks(QueryOracle& oracle) {
  using Side = QueryOracle::Side;
  const int n = oracle.n();
  SolveResult res;
  if (n == 1) {
    res.matching = Matching{{0}};
    res.single_bottom = true;
    return res;
  }
  const auto& takers = oracle.free_taker_profile();
  auto bottoms = detail::bottom_set(takers);

  std::vector<int> taker_order;
  std::vector<int> giver_top(n, -1);
  if (bottoms.size() == 2) {
    int bp = bottoms[0], bq = bottoms[1];
    auto rank_bp = detail::full_via_ranks(oracle, Side::givers, bp);
    auto rank_bq = detail::full_via_ranks(oracle, Side::givers, bq);
    std::vector<char> tops_bp(n, 0);
    for (int a = 0; a < n; ++a)
      if (takers.top(a) == bp) tops_bp[a] = 1;
    auto left = detail::restrict_to(rank_bq, tops_bp);
    std::reverse(left.begin(), left.end());
    std::vector<char> rest(n);
    for (int a = 0; a < n; ++a) rest[a] = !tops_bp[a];
    auto right = detail::restrict_to(rank_bp, rest);
    left.insert(left.end(), right.begin(), right.end());
    taker_order = std::move(left);
    giver_top[bp] = rank_bp.front();
    giver_top[bq] = rank_bq.front();
    res.bound = 3 * n - 4;
  } else if (bottoms.size() == 1) {
    res.single_bottom = true;
    int b = bottoms[0];
    auto rank_b = detail::full_via_ranks(oracle, Side::givers, b);
    taker_order.assign(rank_b.rbegin(), rank_b.rend());
    giver_top[b] = rank_b.front();
    res.bound = 2 * n - 2;
  } else {
    throw inconsistency_error("takers report more than two bottom givers");
  }

  for (int g = 0; g < n; ++g)
    if (giver_top[g] < 0) giver_top[g] = oracle.rank(Side::givers, g, 1);

  int a = taker_order.back();
  int a2 = a == 0 ? 1 : 0;
  std::vector<char> tops_a(n, 0);
  for (int g = 0; g < n; ++g) tops_a[g] = giver_top[g] == a;
  auto giver_order = detail::giver_order_via_extreme_taker(
      takers.rankings[a], takers.rankings[a2], tops_a);

  res.matching.item_of.assign(n, -1);
  for (int i = 0; i < n; ++i)
    res.matching.item_of[taker_order[i]] = giver_order[i];
  res.matching.validate();
  res.rank_queries = oracle.rank_queries();
  res.full_queries = oracle.full_queries();
  res.within_bound = res.rank_queries <= res.bound && res.full_queries == 0;
  return res;
}

/// Zero-knowledge setting: optimal matching with at most 5n-4 rank queries.
inline SolveResult solve_zero_knowledge(QueryOracle& oracle) {
  using Side = QueryOracle::Side;
  const int n = oracle.n();
  SolveResult res;
  res.bound = n == 1 ? 0 : 5 * n - 4;
  if (n == 1) {
    res.matching = Matching{{0}};
    return res;
  }

  const int a0 = 0;
  int b1 = oracle.rank(Side::takers, a0, n);  // a0's least-preferred giver
  std::vector<int> taker_top(n, -1);
  for (int t = 0; t < n; ++t)
    if (t != a0) taker_top[t] = oracle.rank(Side::takers, t, 1);

  int a1 = -1;
  for (int t = 0; t < n; ++t)
    if (taker_top[t] == b1) {
      a1 = t;
      break;
    }

  std::vector<int> taker_order, giver_order;
  if (a1 >= 0) {
    // Case 1: some taker tops b1, so b1 is the far giver on a1's side and
    // every other giver lies beyond a1; a1's ranking orders them all.
    auto rank_a1 = detail::full_via_ranks(oracle, Side::takers, a1);
    giver_order.clear();
    for (auto it = rank_a1.rbegin(); it != rank_a1.rend(); ++it)
      if (*it != b1) giver_order.push_back(*it);
    giver_order.push_back(b1);

    auto rank_b1 = detail::full_via_ranks(oracle, Side::givers, b1);
    std::vector<char> tops_b1(n, 0);
    for (int t = 0; t < n; ++t) tops_b1[t] = taker_top[t] == b1;
    int g2 = b1 == 0 ? 1 : 0;
    auto rank_g2 = detail::full_via_ranks(oracle, Side::givers, g2);
    auto right = detail::restrict_to(rank_g2, tops_b1);
    std::vector<char> rest(n);
    for (int t = 0; t < n; ++t) rest[t] = !tops_b1[t];
    auto left = detail::restrict_to(rank_b1, rest);
    std::reverse(left.begin(), left.end());
    left.insert(left.end(), right.begin(), right.end());
    taker_order = std::move(left);
  } else {
    // Case 2: nobody tops b1, so every taker is on the near side of b1 and
    // b1's ranking is the true taker order.
    auto rank_b1 = detail::full_via_ranks(oracle, Side::givers, b1);
    taker_order.assign(rank_b1.rbegin(), rank_b1.rend());

    std::vector<int> giver_top(n, -1);
    for (int g = 0; g < n; ++g)
      if (g != b1) giver_top[g] = oracle.rank(Side::givers, g, 1);
    int a = taker_order.back();
    giver_top[b1] = a;  // b1 is the far giver: its top is the extreme taker
    auto rank_a = detail::full_via_ranks(oracle, Side::takers, a);
    int a2 = a == 0 ? 1 : 0;
    auto rank_a2 = detail::full_via_ranks(oracle, Side::takers, a2);
    std::vector<char> tops_a(n, 0);
    for (int g = 0; g < n; ++g) tops_a[g] = giver_top[g] == a;
    giver_order =
        detail::giver_order_via_extreme_taker(rank_a, rank_a2, tops_a);
  }

  res.matching.item_of.assign(n, -1);
  for (int i = 0; i < n; ++i)
    res.matching.item_of[taker_order[i]] = giver_order[i];
  res.matching.validate();
  res.rank_queries = oracle.rank_queries();
  res.full_queries = oracle.full_queries();
  res.within_bound = res.rank_queries <= res.bound && res.full_queries == 0;
  return res;
}

/// Sanity ceiling: n full-preference queries on the giver side always
/// suffice (reduces to the two-sided optimum).
inline SolveResult solve_full_side(QueryOracle& oracle) {
  using Side = QueryOracle::Side;
  const int n = oracle.n();
  OrdinalProfile givers;
  givers.rankings.resize(n);
  for (int g = 0; g < n; ++g) givers.rankings[g] = oracle.full(Side::givers, g);
  SolveResult res;
  res.matching = two_sided_optimal(oracle.free_taker_profile(), givers);
  res.rank_queries = oracle.rank_queries();
  res.full_queries = oracle.full_queries();
  res.bound = n;
  res.within_bound = res.full_queries <= n && res.rank_queries == 0;
  return res;
}

/// Indistinguishability witness: two metrics consistent with everything an
/// algorithm has seen after querying `queried` givers, whose optima differ
/// on the last taker's partner.
struct WitnessPair {
  TwoSidedInstance top, bottom;
  int gi, gj;  // the two displaced (unqueried) givers
};

inline TwoSidedInstance fullpref_lb_metric(int n, int displaced) {
  TwoSidedInstance inst;
  inst.takers.resize(n);
  inst.givers.resize(n);
  for (int k = 0; k < n; ++k) inst.takers[k] = k;
  for (int g = 0; g < n; ++g)
    inst.givers[g] = g == displaced ? Rational((n - 1) + n * (g + 1))
                                    : Rational(-(g + 1) * n);
  return inst;
}

inline WitnessPair fullpref_lb_witness(int n, const std::vector<int>& queried) {
  if (n < 2) throw std::domain_error("witness needs n >= 2");
  if (static_cast<int>(queried.size()) > n - 2)
    throw std::domain_error("witness: too many queried givers");
  std::vector<char> is_queried(n, 0);
  for (int g : queried) {
    if (g < 0 || g >= n) throw std::domain_error("witness: bad giver id");
    is_queried[g] = 1;
  }
  int gi = -1, gj = -1;
  for (int g = 0; g < n; ++g) {
    if (is_queried[g]) continue;
    if (gi < 0)
      gi = g;
    else if (gj < 0) {
      gj = g;
      break;
    }
  }
  return {fullpref_lb_metric(n, gi), fullpref_lb_metric(n, gj), gi, gj};
}

}  // namespace linematch
