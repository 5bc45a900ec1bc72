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

// Double-effect permissibility over the worlds of a causal agency model.
//
// For every action a made true by a world w:
//   1. u(a) >= 0
//   2. every intended consequence c of a has u(c) >= 0
//   3. some intended consequence c of a has u(c) > 0
// and for the world itself:
//   4. no x in A ∪ C with u(x) < 0 is a but-for cause of a y in C with
//      u(y) >= 0
//   5. the utilities of the consequences true in w sum to more than 0.
//
// Every failing condition is reported; nothing short-circuits.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ethica/causal_model.hpp"
#include "ethica/error.hpp"

namespace ethica {

/// Worlds are indexed by the set of true actions, bit i for the i-th
/// declared action.
using ActionMask = std::uint64_t;

inline constexpr std::size_t kMaxPowerSetActions = 24;

struct UtilityTerm {
  std::string variable;
  double utility;

  bool operator==(const UtilityTerm&) const = default;
};

struct ConditionResult {
  int index = 0;  // 1..5
  bool passed = true;
  // Action the result belongs to (conditions 1-3); empty for 4 and 5.
  std::string action;
  // 1: the action when it fails. 2: failing intended consequences.
  // 3: satisfying intended consequences. 5: every true consequence.
  std::vector<UtilityTerm> terms;
  // 4: each offending cause -> effect pair.
  std::vector<CausalWitness> chains;
  // 5: the utility sum.
  std::optional<double> sum;

  bool operator==(const ConditionResult&) const = default;

  bool has_witness() const {
    return !terms.empty() || !chains.empty() || sum.has_value();
  }
};

struct ActionConditions {
  std::string action;
  std::vector<ConditionResult> results;  // conditions 1, 2, 3

  bool operator==(const ActionConditions&) const = default;
};

struct PermissibilityVerdict {
  World world;
  ActionMask actions_taken = 0;
  std::vector<ActionConditions> per_action;
  std::vector<ConditionResult> world_conditions;  // conditions 4, 5
  bool permissible = false;

  bool operator==(const PermissibilityVerdict&) const = default;

  std::vector<const ConditionResult*> failures() const {
    std::vector<const ConditionResult*> out;
    for (const auto& a : per_action)
      for (const auto& r : a.results)
        if (!r.passed) out.push_back(&r);
    for (const auto& r : world_conditions)
      if (!r.passed) out.push_back(&r);
    return out;
  }

  const ConditionResult& world_condition(int index) const {
    for (const auto& r : world_conditions)
      if (r.index == index) return r;
    throw Error(ErrorKind::invalid_argument,
                "no world condition " + std::to_string(index));
  }
};

inline ActionMask action_mask(const CausalAgencyModel& model, const World& world) {
  ActionMask mask = 0;
  for (std::size_t i = 0; i < model.actions.size(); ++i)
    if (world.value(model.actions[i])) mask |= ActionMask{1} << i;
  return mask;
}

inline std::vector<std::string> actions_in(const CausalAgencyModel& model,
                                           ActionMask mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < model.actions.size(); ++i)
    if ((mask >> i) & 1U) out.push_back(model.actions[i]);
  return out;
}

inline World world_for(const CausalAgencyModel& model,
                       const Assignment& background, ActionMask mask) {
  Assignment assignment = background;
  for (std::size_t i = 0; i < model.actions.size(); ++i)
    assignment[model.actions[i]] = ((mask >> i) & 1U) != 0;
  return evaluate(model, std::move(assignment));
}

/// Candidate worlds sharing one background valuation, in ascending action
/// mask order: one per action under exactly_one, all 2^|A| action subsets
/// under power_set.
inline std::vector<World> generate_worlds(const CausalAgencyModel& model,
                                          const Assignment& background) {
  std::vector<std::string> missing;
  for (const auto& b : model.background)
    if (background.count(b) == 0) missing.push_back(b);
  if (!missing.empty())
    throw Error(ErrorKind::incomplete_assignment,
                "background assignment is missing " + detail::join(missing));
  for (const auto& [name, value] : background)
    if (model.kind_of(name) != VariableKind::background)
      throw Error(ErrorKind::unknown_name,
                  "'" + name + "' is not a background variable of '" +
                      model.name + "'");

  std::vector<World> worlds;
  const std::size_t n = model.actions.size();
  if (model.mode == ActionMode::exactly_one) {
    for (std::size_t i = 0; i < n; ++i)
      worlds.push_back(world_for(model, background, ActionMask{1} << i));
    return worlds;
  }
  if (n > kMaxPowerSetActions)
    throw Error(ErrorKind::invalid_argument,
                "power_set mode supports at most " +
                    std::to_string(kMaxPowerSetActions) + " actions");
  for (ActionMask mask = 0; mask < (ActionMask{1} << n); ++mask)
    worlds.push_back(world_for(model, background, mask));
  return worlds;
}

namespace detail {

inline void require_model_world(const CausalAgencyModel& model,
                                const World& world) {
  const auto fail = [&model](const std::string& why) {
    throw Error(ErrorKind::foreign_world,
                "world was not generated from model '" + model.name + "': " + why);
  };
  std::size_t expected = model.actions.size() + model.background.size();
  if (world.assignment.size() != expected ||
      world.derived.size() != model.consequences.size())
    fail("variable sets differ");
  for (const auto& [name, value] : world.assignment) {
    const auto kind = model.kind_of(name);
    if (kind != VariableKind::action && kind != VariableKind::background)
      fail("'" + name + "' is not an action or background variable");
  }
  if (evaluate(model, world.assignment).derived != world.derived)
    fail("consequence valuation is not the model's fixpoint");
}

}  // namespace detail

inline PermissibilityVerdict check_permissibility(const CausalAgencyModel& model,
                                                  const World& world) {
  detail::require_model_world(model, world);

  PermissibilityVerdict verdict;
  verdict.world = world;
  verdict.actions_taken = action_mask(model, world);

  for (const auto& a : actions_in(model, verdict.actions_taken)) {
    ActionConditions ac{a, {}};

    ConditionResult c1{1, model.utility(a) >= 0, a, {}, {}, {}};
    if (!c1.passed) c1.terms.push_back({a, model.utility(a)});

    ConditionResult c2{2, true, a, {}, {}, {}};
    ConditionResult c3{3, false, a, {}, {}, {}};
    for (const auto& i : model.intentions) {
      if (i.action != a) continue;
      const double u = model.utility(i.consequence);
      if (u < 0) {
        c2.passed = false;
        c2.terms.push_back({i.consequence, u});
      }
      if (u > 0) {
        c3.passed = true;
        c3.terms.push_back({i.consequence, u});
      }
    }
    ac.results = {std::move(c1), std::move(c2), std::move(c3)};
    verdict.per_action.push_back(std::move(ac));
  }

  ConditionResult c4{4, true, {}, {}, {}, {}};
  std::vector<std::string> causes = model.actions;
  causes.insert(causes.end(), model.consequences.begin(), model.consequences.end());
  for (const auto& x : causes) {
    if (!(model.utility(x) < 0) || !world.value(x)) continue;
    for (const auto& y : model.consequences) {
      if (model.utility(y) < 0) continue;
      auto query = is_cause(model, world, x, y);
      if (query) {
        c4.passed = false;
        c4.chains.push_back(std::move(*query.witness));
      }
    }
  }

  ConditionResult c5{5, false, {}, {}, {}, 0.0};
  double sum = 0;
  for (const auto& c : model.consequences) {
    if (!world.derived.at(c)) continue;
    sum += model.utility(c);
    c5.terms.push_back({c, model.utility(c)});
  }
  c5.sum = sum;
  c5.passed = sum > 0;

  verdict.world_conditions = {std::move(c4), std::move(c5)};
  verdict.permissible = verdict.failures().empty();
  return verdict;
}

/// One verdict per generated world, in canonical world order.
inline std::vector<PermissibilityVerdict> permissible_worlds(
    const CausalAgencyModel& model, const Assignment& background) {
  std::vector<PermissibilityVerdict> out;
  for (const auto& w : generate_worlds(model, background))
    out.push_back(check_permissibility(model, w));
  return out;
}

}  // namespace ethica
