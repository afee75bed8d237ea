#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "linematch/core.hpp"
#include "linematch/twosided.hpp"

namespace linematch {

/// Deterministic, platform-independent generator (splitmix64).
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int64_t in_range(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
};

inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  SplitMix64 rng(seed ^ (salt * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL));
  return rng.next();
}

enum class Distribution { uniform_int, clustered };

struct GenSpec {
  int n = 5;
  uint64_t seed = 0;
  Distribution dist = Distribution::uniform_int;
  bool two_sided = false;
  bool distinct = false;
  int64_t coord_min = 0;
  int64_t coord_max = 100;
};

namespace detail {

inline std::vector<Rational> draw_coords(SplitMix64& rng, const GenSpec& spec,
                                         int count, std::set<int64_t>& used) {
  std::vector<int64_t> centers;
  if (spec.dist == Distribution::clustered) {
    int c = std::max(1, spec.n / 3);
    for (int i = 0; i < c; ++i)
      centers.push_back(rng.in_range(spec.coord_min, spec.coord_max));
  }
  int64_t spread = std::max<int64_t>(1, (spec.coord_max - spec.coord_min) / 10);
  std::vector<Rational> out;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000)
        throw std::domain_error("coordinate range too small for distinct points");
      int64_t x;
      if (spec.dist == Distribution::clustered) {
        int64_t c = centers[rng.next() % centers.size()];
        x = c + rng.in_range(-spread, spread);
      } else {
        x = rng.in_range(spec.coord_min, spec.coord_max);
      }
      if (spec.distinct && used.count(x)) continue;
      used.insert(x);
      out.emplace_back(x);
      break;
    }
  }
  return out;
}

}  // namespace detail

inline Instance gen_random(const GenSpec& spec) {
  if (spec.n < 1) throw std::domain_error("n must be positive");
  if (spec.distinct && spec.coord_max - spec.coord_min + 1 < 2 * spec.n)
    throw std::domain_error("coordinate range too small for distinct points");
  SplitMix64 rng(mix_seed(spec.seed, 0x15ce));
  std::set<int64_t> used;
  Instance inst;
  inst.agents = detail::draw_coords(rng, spec, spec.n, used);
  inst.items = detail::draw_coords(rng, spec, spec.n, used);
  return inst;
}

/// Two-sided generation keeps all coordinates distinct and additionally
/// rejects exact cross-side midpoint ties, so tops and bottoms always
/// reflect geometry rather than the tie-break.
inline TwoSidedInstance gen_random_two_sided(const GenSpec& spec) {
  if (spec.n < 1) throw std::domain_error("n must be positive");
  if (spec.coord_max - spec.coord_min + 1 < 2 * spec.n)
    throw std::domain_error("coordinate range too small for distinct points");
  GenSpec local = spec;
  local.distinct = true;
  for (uint64_t round = 0;; ++round) {
    if (round > 10000)
      throw std::domain_error("cannot generate a midpoint-tie-free instance");
    SplitMix64 rng(mix_seed(spec.seed, 0x75ab + round));
    std::set<int64_t> used;
    TwoSidedInstance inst;
    inst.takers = detail::draw_coords(rng, local, spec.n, used);
    inst.givers = detail::draw_coords(rng, local, spec.n, used);
    auto midpoint_tie = [&](const std::vector<Rational>& xs,
                            const std::vector<Rational>& others) {
      for (const auto& x : xs)
        for (size_t i = 0; i < others.size(); ++i)
          for (size_t j = i + 1; j < others.size(); ++j)
            if (x + x == others[i] + others[j]) return true;
      return false;
    };
    if (midpoint_tie(inst.takers, inst.givers) ||
        midpoint_tie(inst.givers, inst.takers))
      continue;
    return inst;
  }
}

enum class KMode { k1, kgeq2 };

namespace detail {

// Spreads each coincident coordinate group by multiples of delta (0 keeps
// the construction-exact coincident points).
inline void perturb_clusters(std::vector<Rational>& xs, const Rational& delta) {
  if (delta == 0) return;
  std::map<Rational, int> seen;
  for (auto& x : xs) {
    int c = seen[x]++;
    if (c > 0) x += c * delta;
  }
}

}  // namespace detail

/// The lower-bound family: everyone shares the ranking g_1 > ... > g_n, the
/// optimum's SC_1 is exactly 1, and whichever agent receives g_n (other than
/// the one at the a_1 slot) pays 3-eps (k=1 family) or forces SC_2 = 3-2eps
/// (k>=2 family, whose optimum is 1 for every k). The victim is placed in
/// the crowd. A nonzero delta spreads the coincident points for
/// robustness-testing variants.
inline Instance gen_lower_bound(int n, KMode mode, const Rational& eps,
                                int victim, const Rational& delta = 0) {
  if (n < 2) throw std::domain_error("lower-bound family needs n >= 2");
  if (!(eps > 0 && eps < 1)) throw std::domain_error("eps must be in (0,1)");
  if (victim < 0 || victim >= n) throw std::domain_error("bad victim id");
  int a1_slot = victim == 0 ? 1 : 0;
  Instance inst;
  inst.agents.assign(n, Rational(0));
  if (mode == KMode::k1) {
    inst.agents[a1_slot] = 2 - eps;
    inst.items.assign(n, Rational(1));
    inst.items[n - 1] = 3 - eps;
  } else {
    inst.agents[a1_slot] = 1 - eps;
    inst.items.assign(n, Rational(0));
    inst.items[n - 1] = 2 - eps;
  }
  detail::perturb_clusters(inst.agents, delta);
  detail::perturb_clusters(inst.items, delta);
  return inst;
}

inline bool is_common_ranking_profile(const OrdinalProfile& profile) {
  for (int a = 0; a < profile.n(); ++a)
    for (int i = 0; i < profile.n(); ++i)
      if (profile.rankings[a][i] != i) return false;
  return true;
}

/// The adversarial responder of the lower-bound proof: given an algorithm's
/// matching on the common-ranking profile, instantiate the metric that casts
/// the g_n recipient as disadvantaged and report the exact ratio.
inline std::pair<Instance, Rational> adversarial_ratio(
    const OrdinalProfile& profile, const Matching& matching, KMode mode,
    const Rational& eps) {
  profile.validate();
  matching.validate();
  const int n = profile.n();
  if (matching.n() != n) throw std::domain_error("matching size mismatch");
  if (!is_common_ranking_profile(profile))
    throw std::domain_error("profile is not the common-ranking profile");
  if (n == 1) return {Instance{{Rational(0)}, {Rational(1)}}, Rational(1)};
  int recipient = matching.agent_of()[n - 1];
  Instance inst = gen_lower_bound(n, mode, eps, recipient);
  if (!check_consistency(profile, inst))
    throw invariant_error("lower-bound metric inconsistent with profile");
  int k = mode == KMode::k1 ? 1 : std::min(2, n);
  Rational alg = k_centrum_cost(inst, matching, k);
  Rational opt = greedy_optimal(inst).cost_per_k[k - 1];
  return {inst, alg / opt};
}

/// The pathology instances on which arbitrary anchor choices lose.
inline Instance gen_tiebreak_pathology(int n, KMode mode, const Rational& eps,
                                       const Rational& delta = 0) {
  if (!(eps > 0 && eps < 1)) throw std::domain_error("eps must be in (0,1)");
  Instance inst;
  if (mode == KMode::k1) {
    if (n < 4) throw std::domain_error("tiebreak k1 family needs n >= 4");
    inst.agents.assign(n, 2 - eps);
    inst.items.assign(n, 2 - eps);
    inst.items[0] = 0;
    inst.agents[0] = 1;
    inst.items[n - 2] = 4 - 3 * eps;
    inst.agents[n - 2] = 4 - 3 * eps;
    inst.agents[n - 1] = 5 - 5 * eps;
    inst.items[n - 1] = 6 - 6 * eps;
  } else {
    if (n < 3) throw std::domain_error("tiebreak kgeq2 family needs n >= 3");
    inst.agents.assign(n, 2 - eps);
    inst.items.assign(n, 2 - eps);
    inst.items[n - 2] = 0;
    inst.agents[n - 2] = 1;
    inst.items[n - 1] = 4 - 3 * eps;
    inst.agents[n - 1] = 4 - 3 * eps;
  }
  detail::perturb_clusters(inst.agents, delta);
  detail::perturb_clusters(inst.items, delta);
  return inst;
}

// ---------------------------------------------------------------------------
// JSON persistence. Rationals travel as "p/q" (or plain integer) strings and
// round-trip bit-exactly; ids are 1-based on disk.

inline nlohmann::json coords_to_json(const std::vector<Rational>& xs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : xs) arr.push_back(to_string(x));
  return arr;
}

inline std::vector<Rational> coords_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw parse_error("expected an array of coordinates");
  std::vector<Rational> xs;
  for (const auto& v : arr) {
    if (v.is_number_integer())
      xs.emplace_back(static_cast<int64_t>(v.get<int64_t>()));
    else if (v.is_string())
      xs.push_back(parse_rational(v.get<std::string>()));
    else
      throw parse_error("coordinates must be strings or integers");
  }
  return xs;
}

inline nlohmann::json to_json(const Instance& inst) {
  return {{"agents", coords_to_json(inst.agents)},
          {"items", coords_to_json(inst.items)}};
}

inline nlohmann::json to_json(const TwoSidedInstance& inst) {
  return {{"takers", coords_to_json(inst.takers)},
          {"givers", coords_to_json(inst.givers)}};
}

inline nlohmann::json to_json(const OrdinalProfile& profile) {
  nlohmann::json rankings = nlohmann::json::array();
  for (const auto& r : profile.rankings) {
    nlohmann::json row = nlohmann::json::array();
    for (int g : r) row.push_back(g + 1);
    rankings.push_back(row);
  }
  return {{"rankings", rankings}};
}

inline nlohmann::json to_json(const Matching& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (int g : m.item_of) arr.push_back(g + 1);
  return arr;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (!j.contains("agents") || !j.contains("items"))
    throw parse_error("instance JSON needs 'agents' and 'items'");
  Instance inst{coords_from_json(j["agents"]), coords_from_json(j["items"])};
  try {
    inst.validate();
  } catch (const std::domain_error& e) {
    throw parse_error(e.what());
  }
  return inst;
}

inline TwoSidedInstance two_sided_from_json(const nlohmann::json& j) {
  if (!j.contains("takers") || !j.contains("givers"))
    throw parse_error("two-sided JSON needs 'takers' and 'givers'");
  TwoSidedInstance inst{coords_from_json(j["takers"]),
                        coords_from_json(j["givers"])};
  try {
    inst.validate();
  } catch (const std::domain_error& e) {
    throw parse_error(e.what());
  }
  return inst;
}

inline OrdinalProfile profile_from_json(const nlohmann::json& j) {
  if (!j.contains("rankings") || !j["rankings"].is_array())
    throw parse_error("profile JSON needs 'rankings'");
  OrdinalProfile profile;
  for (const auto& row : j["rankings"]) {
    if (!row.is_array()) throw parse_error("ranking rows must be arrays");
    std::vector<int> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw parse_error("item ids must be integers");
      r.push_back(v.get<int>() - 1);
    }
    profile.rankings.push_back(std::move(r));
  }
  try {
    profile.validate();
  } catch (const std::domain_error& e) {
    throw parse_error(e.what());
  }
  return profile;
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

inline Instance load_instance(const std::string& path) {
  return instance_from_json(load_json(path));
}

inline TwoSidedInstance load_two_sided(const std::string& path) {
  return two_sided_from_json(load_json(path));
}

inline OrdinalProfile load_profile(const std::string& path) {
  return profile_from_json(load_json(path));
}

}  // namespace linematch
