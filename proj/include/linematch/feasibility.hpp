#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "linematch/rational.hpp"

namespace linematch {

/// One linear constraint  sum_i coef[i] * x_i + constant  (<= | <)  0.
struct LinearConstraint {
  std::vector<Rational> coef;
  Rational constant = 0;
  bool strict = false;
};

namespace detail {

inline bool constraint_trivially_true(const LinearConstraint& c) {
  for (const auto& v : c.coef)
    if (v != 0) return false;
  return c.strict ? c.constant < 0 : c.constant <= 0;
}

inline bool constraint_infeasible(const LinearConstraint& c) {
  for (const auto& v : c.coef)
    if (v != 0) return false;
  return c.strict ? c.constant >= 0 : c.constant > 0;
}

// Scale so the first nonzero coefficient is +-1; used only for deduping.
inline LinearConstraint normalized(LinearConstraint c) {
  Rational scale = 0;
  for (const auto& v : c.coef)
    if (v != 0) {
      scale = rat_abs(v);
      break;
    }
  if (scale == 0 || scale == 1) return c;
  for (auto& v : c.coef) v /= scale;
  c.constant /= scale;
  return c;
}

}  // namespace detail

/// Exact Fourier-Motzkin feasibility over the rationals with mixed
/// strict/non-strict inequalities. Small systems only (fallback path).
inline bool feasible(std::vector<LinearConstraint> cs, int num_vars,
                     size_t work_limit = 200000) {
  using detail::constraint_infeasible;
  using detail::constraint_trivially_true;
  for (int var = 0; var < num_vars; ++var) {
    // Eliminate the variable appearing in the fewest lower*upper products.
    int pick = -1;
    size_t pick_cost = 0;
    for (int v = 0; v < num_vars; ++v) {
      size_t lo = 0, hi = 0, any = 0;
      for (const auto& c : cs) {
        if (c.coef[v] > 0)
          ++hi, ++any;
        else if (c.coef[v] < 0)
          ++lo, ++any;
      }
      if (any == 0) continue;
      size_t cost = lo * hi;
      if (pick < 0 || cost < pick_cost) {
        pick = v;
        pick_cost = cost;
      }
    }
    if (pick < 0) break;

    std::vector<LinearConstraint> lowers, uppers, rest;
    for (auto& c : cs) {
      if (c.coef[pick] > 0)
        uppers.push_back(std::move(c));
      else if (c.coef[pick] < 0)
        lowers.push_back(std::move(c));
      else
        rest.push_back(std::move(c));
    }
    cs = std::move(rest);
    if (cs.size() + lowers.size() * uppers.size() > work_limit)
      throw std::domain_error("feasibility: system too large");
    std::vector<LinearConstraint> seen;
    for (const auto& lo : lowers) {
      for (const auto& up : uppers) {
        // lo: -a*x + L <= 0  (x >= L/a),  up: b*x + U <= 0  (x <= -U/b)
        Rational a = -lo.coef[pick];
        Rational b = up.coef[pick];
        LinearConstraint combined;
        combined.coef.resize(num_vars);
        for (int v = 0; v < num_vars; ++v)
          combined.coef[v] = lo.coef[v] * b + up.coef[v] * a;
        combined.constant = lo.constant * b + up.constant * a;
        combined.strict = lo.strict || up.strict;
        if (constraint_infeasible(combined)) return false;
        if (constraint_trivially_true(combined)) continue;
        cs.push_back(detail::normalized(std::move(combined)));
      }
    }
    // Dedupe exact duplicates to keep growth in check.
    std::sort(cs.begin(), cs.end(), [](const auto& x, const auto& y) {
      if (x.coef != y.coef) return x.coef < y.coef;
      if (x.constant != y.constant) return x.constant < y.constant;
      return x.strict < y.strict;
    });
    cs.erase(std::unique(cs.begin(), cs.end(),
                         [](const auto& x, const auto& y) {
                           return x.coef == y.coef && x.constant == y.constant &&
                                  x.strict == y.strict;
                         }),
             cs.end());
  }
  for (const auto& c : cs)
    if (constraint_infeasible(c)) return false;
  return true;
}

}  // namespace linematch
