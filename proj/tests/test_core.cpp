#include <doctest.h>

#include "linematch/core.hpp"
#include "linematch/instances.hpp"

using namespace linematch;

namespace {

Instance figure1a(int n, const Rational& eps) {
  // Crowd at 0, items g_1..g_{n-1} at 1, a_1 at 2-eps, g_n at 3-eps.
  return gen_lower_bound(n, KMode::k1, eps, n - 1);
}

}  // namespace

TEST_CASE("derive_profile: single point") {
  Instance inst{{Rational(0)}, {Rational(5)}};
  auto p = derive_profile(inst);
  CHECK(p.rankings == std::vector<std::vector<int>>{{0}});
}

TEST_CASE("derive_profile: nearest first") {
  Instance inst{{Rational(0), Rational(10)}, {Rational(1), Rational(11)}};
  auto p = derive_profile(inst);
  CHECK(p.rankings[0] == std::vector<int>{0, 1});
  CHECK(p.rankings[1] == std::vector<int>{1, 0});
}

TEST_CASE("derive_profile: lower-bound family has one common ranking") {
  auto inst = figure1a(4, Rational(1, 100));
  auto p = derive_profile(inst);
  for (int a = 0; a < 4; ++a)
    CHECK(p.rankings[a] == std::vector<int>{0, 1, 2, 3});
  CHECK(is_common_ranking_profile(p));
}

TEST_CASE("derive_profile tie-break: coordinate then id") {
  // Agent equidistant from items at -2 and 2: smaller coordinate wins.
  Instance inst{{Rational(0), Rational(5)}, {Rational(2), Rational(-2)}};
  auto p = derive_profile(inst);
  CHECK(p.rankings[0] == std::vector<int>{1, 0});
  // Coincident items: smaller id wins.
  Instance inst2{{Rational(0), Rational(1)}, {Rational(3), Rational(3)}};
  auto p2 = derive_profile(inst2);
  CHECK(p2.rankings[0] == std::vector<int>{0, 1});
  CHECK(p2.rankings[1] == std::vector<int>{0, 1});
}

TEST_CASE("k_centrum_cost: sum of k largest") {
  Instance inst{{Rational(0), Rational(0), Rational(0)},
                {Rational(5), Rational(2), Rational(7)}};
  Matching identity{{0, 1, 2}};
  CHECK(k_centrum_cost(inst, identity, 2) == 12);
  CHECK(k_centrum_cost(inst, identity, 1) == 7);
  CHECK(k_centrum_cost(inst, identity, 3) == 14);
  CHECK_THROWS_AS(k_centrum_cost(inst, identity, 0), std::domain_error);
  CHECK_THROWS_AS(k_centrum_cost(inst, identity, 4), std::domain_error);
}

TEST_CASE("figure 1(a): optimal matching pays exactly 1 per contributing agent") {
  const int n = 5;
  auto inst = figure1a(n, Rational(1, 100));
  // a_1 slot is agent 0; optimal pairs it with g_n and shifts the crowd.
  Matching opt;
  opt.item_of.assign(n, -1);
  opt.item_of[0] = n - 1;
  for (int i = 1; i < n; ++i) opt.item_of[i] = i - 1;
  CHECK(k_centrum_cost(inst, opt, 1) == 1);
  // Every agent of this k=1 family sits at distance exactly 1, so SC_k = k;
  // the all-k cost of 1 belongs to the k>=2 family.
  for (int k = 1; k <= n; ++k) CHECK(k_centrum_cost(inst, opt, k) == k);
  auto kg = gen_lower_bound(n, KMode::kgeq2, Rational(1, 100), n - 1);
  Matching opt2 = opt;
  for (int k = 1; k <= n; ++k) CHECK(k_centrum_cost(kg, opt2, k) == 1);
}

TEST_CASE("check_consistency") {
  auto inst = figure1a(4, Rational(1, 100));
  auto p = derive_profile(inst);
  CHECK(check_consistency(p, inst));
  auto reversed = p;
  std::reverse(reversed.rankings[0].begin(), reversed.rankings[0].end());
  CHECK_FALSE(check_consistency(reversed, inst));
  OrdinalProfile small{{{0}}};
  CHECK_THROWS_AS(check_consistency(small, inst), std::domain_error);
}

TEST_CASE("property: derived profiles are consistent; SC_k monotone") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    GenSpec spec;
    spec.n = 1 + static_cast<int>(seed % 9);
    spec.seed = seed;
    spec.coord_max = 40;
    auto inst = gen_random(spec);
    auto p = derive_profile(inst);
    CHECK(check_consistency(p, inst));

    Matching identity;
    identity.item_of.resize(spec.n);
    std::iota(identity.item_of.begin(), identity.item_of.end(), 0);
    auto sc = cost_profile(inst, identity);
    auto d = match_distances(inst, identity);
    Rational total = 0, biggest = 0;
    for (const auto& x : d) {
      total += x;
      biggest = std::max(biggest, x);
    }
    CHECK(sc.front() == biggest);
    CHECK(sc.back() == total);
    for (size_t k = 1; k < sc.size(); ++k) CHECK(sc[k - 1] <= sc[k]);
  }
}

TEST_CASE("property: agents between agents with a common top share it") {
  for (uint64_t seed = 0; seed < 150; ++seed) {
    GenSpec spec;
    spec.n = 2 + static_cast<int>(seed % 7);
    spec.seed = seed + 1000;
    spec.coord_max = 30;
    auto inst = gen_random(spec);
    auto p = derive_profile(inst);
    for (int a = 0; a < spec.n; ++a)
      for (int b = 0; b < spec.n; ++b) {
        if (p.top(a) != p.top(b)) continue;
        for (int c = 0; c < spec.n; ++c) {
          bool between = inst.agents[a] <= inst.agents[c] &&
                         inst.agents[c] <= inst.agents[b];
          if (between) CHECK(p.top(c) == p.top(a));
        }
      }
  }
}

TEST_CASE("property: favorite-item blocks are ordered left to right") {
  // <= accommodates coincident points.
  for (uint64_t seed = 0; seed < 150; ++seed) {
    GenSpec spec;
    spec.n = 2 + static_cast<int>(seed % 7);
    spec.seed = seed + 5000;
    spec.coord_max = 30;
    auto inst = gen_random(spec);
    auto p = derive_profile(inst);
    for (int a = 0; a < spec.n; ++a)
      for (int b = 0; b < spec.n; ++b) {
        if (inst.items[p.top(a)] < inst.items[p.top(b)])
          CHECK(inst.agents[a] <= inst.agents[b]);
      }
  }
}
