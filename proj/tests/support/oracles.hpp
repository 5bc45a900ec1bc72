// Copyright 2026 The Ethica Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force reference implementations, written straight from the
// definitions and sharing no evaluation code with the library. Tests compare
// library output against these.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ethica/causal_model.hpp"
#include "ethica/formula.hpp"
#include "ethica/governor.hpp"
#include "ethica/policy.hpp"

namespace oracle {

using Values = std::map<std::string, bool, std::less<>>;

inline bool eval(const ethica::Formula& f, const Values& v) {
  using K = ethica::Formula::Kind;
  switch (f.kind()) {
    case K::constant: return f.value();
    case K::variable: return v.at(f.name());
    case K::negation: return !eval(f.operand(), v);
    case K::conjunction: {
      const bool l = eval(f.lhs(), v);
      const bool r = eval(f.rhs(), v);
      return l && r;
    }
    case K::disjunction: {
      const bool l = eval(f.lhs(), v);
      const bool r = eval(f.rhs(), v);
      return l || r;
    }
  }
  return false;
}

// Mechanisms as a plain consequent -> antecedent table, with optional pins
// standing in for removed mechanisms.
struct Equations {
  std::map<std::string, ethica::Formula, std::less<>> rules;
  Values pinned;
};

inline Equations equations_of(const ethica::CausalAgencyModel& m) {
  Equations eq;
  for (const auto& mech : m.mechanisms) eq.rules.emplace(mech.consequent, mech.antecedent);
  eq.pinned = m.pinned;
  return eq;
}

/// Iterates every mechanism simultaneously from an all-false start until
/// nothing changes. For acyclic equations this reaches the unique solution
/// within |C| + 1 rounds.
inline Values fixpoint(const std::vector<std::string>& consequences, const Equations& eq,
                       const Values& exogenous) {
  Values v = exogenous;
  for (const auto& c : consequences) v[c] = false;
  for (const auto& [c, value] : eq.pinned) v[c] = value;
  for (std::size_t round = 0; round <= consequences.size() + 1; ++round) {
    Values next = v;
    for (const auto& c : consequences) {
      if (eq.pinned.count(c)) continue;
      next[c] = eval(eq.rules.at(c), v);
    }
    if (next == v) break;
    v = std::move(next);
  }
  Values derived;
  for (const auto& c : consequences) derived[c] = v.at(c);
  return derived;
}

inline Values fixpoint(const ethica::CausalAgencyModel& m, const Values& exogenous) {
  return fixpoint(m.consequences, equations_of(m), exogenous);
}

inline bool is_consequence(const ethica::CausalAgencyModel& m, const std::string& x) {
  return std::find(m.consequences.begin(), m.consequences.end(), x) != m.consequences.end();
}

/// Consequence valuation after flipping `x` (removing its mechanism when x
/// is a consequence).
inline Values counterfactual(const ethica::CausalAgencyModel& m, const Values& exogenous,
                             const std::string& x) {
  Equations eq = equations_of(m);
  Values ex = exogenous;
  if (is_consequence(m, x)) {
    const bool factual = fixpoint(m, exogenous).at(x);
    eq.rules.erase(x);
    eq.pinned[x] = !factual;
  } else {
    ex[x] = !ex.at(x);
  }
  return fixpoint(m.consequences, eq, ex);
}

inline bool value_of(const Values& exogenous, const Values& derived, const std::string& x) {
  auto it = exogenous.find(x);
  return it != exogenous.end() ? it->second : derived.at(x);
}

/// x ⇝ y: both hold, and y fails once x is flipped.
inline bool causes(const ethica::CausalAgencyModel& m, const Values& exogenous,
                   const std::string& x, const std::string& y) {
  const Values factual = fixpoint(m, exogenous);
  if (!value_of(exogenous, factual, x) || !factual.at(y)) return false;
  return !counterfactual(m, exogenous, x).at(y);
}

inline double u(const ethica::CausalAgencyModel& m, const std::string& x) {
  auto it = m.utilities.find(x);
  return it == m.utilities.end() ? 0.0 : it->second;
}

struct Conditions {
  // Per true action (declaration order): conditions 1..3.
  std::vector<std::array<bool, 3>> per_action;
  bool c4 = true;
  bool c5 = false;
  double sum = 0;
  std::vector<std::pair<std::string, std::string>> c4_pairs;  // offending x ⇝ y
  bool permissible = false;
};

/// The five conditions over every x, y and every intended consequence.
inline Conditions conditions(const ethica::CausalAgencyModel& m, const Values& exogenous) {
  Conditions out;
  const Values derived = fixpoint(m, exogenous);
  bool all = true;
  for (const auto& a : m.actions) {
    if (!exogenous.at(a)) continue;
    bool c1 = u(m, a) >= 0;
    bool c2 = true;
    bool c3 = false;
    for (const auto& [act, c] : m.intentions) {
      if (act != a) continue;
      c2 = c2 && u(m, c) >= 0;
      c3 = c3 || u(m, c) > 0;
    }
    out.per_action.push_back({c1, c2, c3});
    all = all && c1 && c2 && c3;
  }
  std::vector<std::string> xs = m.actions;
  xs.insert(xs.end(), m.consequences.begin(), m.consequences.end());
  for (const auto& x : xs)
    for (const auto& y : m.consequences) {
      if (causes(m, exogenous, x, y) && 0 > u(m, x) && !(0 > u(m, y))) {
        out.c4 = false;
        out.c4_pairs.push_back({x, y});
      }
    }
  for (const auto& c : m.consequences)
    if (derived.at(c)) out.sum += u(m, c);
  out.c5 = out.sum > 0;
  out.permissible = all && out.c4 && out.c5;
  return out;
}

// --- random models ----------------------------------------------------------

inline ethica::Formula random_formula(std::mt19937_64& rng,
                                      const std::vector<std::string>& pool, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int r = pick(rng);
  if (pool.empty() || depth == 0 || r < 3) {
    if (pool.empty() || r == 0)
      return ethica::Formula::constant(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    return ethica::Formula::var(
        pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  }
  if (r < 5) return ethica::Formula::negate(random_formula(rng, pool, depth - 1));
  auto l = random_formula(rng, pool, depth - 1);
  auto rr = random_formula(rng, pool, depth - 1);
  return r < 8 ? ethica::Formula::conj(std::move(l), std::move(rr))
               : ethica::Formula::disj(std::move(l), std::move(rr));
}

/// A valid model with |A ∪ B ∪ C| <= max_vars. Consequences may depend on
/// consequences declared later, so declaration order is not a valid
/// evaluation order in general.
inline ethica::CausalAgencyModel random_model(std::mt19937_64& rng, std::size_t max_vars = 10,
                                              std::size_t max_actions = 4,
                                              std::size_t max_consequences = 6) {
  ethica::CausalAgencyModel m;
  m.name = "Random";
  std::uniform_int_distribution<std::size_t> na(0, max_actions);
  std::size_t n_a = na(rng);
  std::size_t n_b = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  std::size_t n_c = std::uniform_int_distribution<std::size_t>(0, max_consequences)(rng);
  while (n_a + n_b + n_c > max_vars) {
    if (n_c > 0) --n_c;
    else if (n_b > 0) --n_b;
    else --n_a;
  }
  for (std::size_t i = 0; i < n_a; ++i) m.actions.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < n_b; ++i) {
    m.background.push_back("b" + std::to_string(i));
    m.background_defaults[m.background.back()] =
        std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  }
  for (std::size_t i = 0; i < n_c; ++i) m.consequences.push_back("c" + std::to_string(i));

  // Dependency order: a random permutation of the consequences.
  std::vector<std::string> order = m.consequences;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::string> pool = m.actions;
  pool.insert(pool.end(), m.background.begin(), m.background.end());
  std::map<std::string, ethica::Formula> rules;
  for (const auto& c : order) {
    rules.emplace(c, random_formula(rng, pool, 3));
    pool.push_back(c);
  }
  for (const auto& c : m.consequences) m.mechanisms.push_back({c, rules.at(c)});

  const std::vector<double> values{-2, -1, -0.5, 0, 0, 1, 2, 3.5, 10};
  std::vector<std::string> all = m.actions;
  all.insert(all.end(), m.background.begin(), m.background.end());
  all.insert(all.end(), m.consequences.begin(), m.consequences.end());
  for (const auto& v : all)
    if (std::uniform_int_distribution<int>(0, 3)(rng) != 0)
      m.utilities[v] = values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];

  for (const auto& a : m.actions)
    for (const auto& c : m.consequences)
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) m.intentions.push_back({a, c});
  m.mode = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? ethica::ActionMode::exactly_one
                                                              : ethica::ActionMode::power_set;
  return m;
}

/// Every interpretation of A ∪ B, packed as bits (actions first).
inline std::vector<Values> all_interpretations(const ethica::CausalAgencyModel& m) {
  std::vector<std::string> vars = m.actions;
  vars.insert(vars.end(), m.background.begin(), m.background.end());
  std::vector<Values> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << vars.size()); ++bits) {
    Values v;
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = ((bits >> i) & 1U) != 0;
    out.push_back(std::move(v));
  }
  return out;
}

// --- orderings ----------------------------------------------------------------

/// -1: a better, 1: b better, 0: equal. Count vectors over ranks, most
/// severe rank first, compared element by element.
inline int compare_plans(const ethica::EthicalPolicy& policy,
                         const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::set<long, std::greater<>> ranks;
  for (const auto& p : policy.principles) ranks.insert(p.rank);
  auto count = [&policy](const std::vector<std::string>& vs, long rank) {
    long n = 0;
    for (const auto& v : vs)
      for (const auto& p : policy.principles)
        if (p.id == v && p.rank == rank) ++n;
    return n;
  };
  for (long r : ranks) {
    const long ca = count(a, r), cb = count(b, r);
    if (ca != cb) return ca < cb ? -1 : 1;
  }
  return 0;
}

/// -1: t1 wins, 1: t2 wins, 0: equal, scanning laws in `order`.
inline int lex(const ethica::LawAnnotationSet& ann, std::size_t t1, std::size_t t2,
               const std::vector<std::size_t>& order) {
  for (std::size_t law : order) {
    if (ann.prefers(law, t1, t2)) return -1;
    if (ann.prefers(law, t2, t1)) return 1;
  }
  return 0;
}

inline std::vector<std::size_t> natural_order(std::size_t n_laws) {
  std::vector<std::size_t> o(n_laws);
  std::iota(o.begin(), o.end(), std::size_t{0});
  return o;
}

/// Fewest defeats, then lowest index; undominated tasks have zero defeats.
inline std::size_t select(const ethica::LawAnnotationSet& ann,
                          const std::vector<std::size_t>& order) {
  std::size_t best = 0, best_defeats = ~std::size_t{0};
  for (std::size_t t = 0; t < ann.n_tasks(); ++t) {
    std::size_t defeats = 0;
    for (std::size_t s = 0; s < ann.n_tasks(); ++s)
      if (s != t && lex(ann, s, t, order) == -1) ++defeats;
    if (defeats < best_defeats) {
      best = t;
      best_defeats = defeats;
    }
  }
  return best;
}

inline bool has_undominated(const ethica::LawAnnotationSet& ann) {
  const auto order = natural_order(ann.n_laws());
  for (std::size_t t = 0; t < ann.n_tasks(); ++t) {
    bool beaten = false;
    for (std::size_t s = 0; s < ann.n_tasks(); ++s)
      beaten = beaten || (s != t && lex(ann, s, t, order) == -1);
    if (!beaten) return true;
  }
  return false;
}

}  // namespace oracle
