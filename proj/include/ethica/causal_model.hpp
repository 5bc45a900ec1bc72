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

// Causal agency models: actions, background facts and consequences tied
// together by acyclic boolean mechanisms, plus utilities and intentions.
//
// A model is a plain value. Evaluation computes the consequence valuation
// in topological order (ties broken by declaration order), interventions
// return fresh model/world pairs, and but-for causality is decided by a
// single intervention.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ethica/error.hpp"
#include "ethica/formula.hpp"
#include "ethica/validation.hpp"

namespace ethica {

enum class VariableKind { action, background, consequence };
enum class ActionMode { exactly_one, power_set };

inline const char* to_string(VariableKind kind) {
  switch (kind) {
    case VariableKind::action: return "action";
    case VariableKind::background: return "background";
    case VariableKind::consequence: return "consequence";
  }
  return "unknown";
}

inline const char* to_string(ActionMode mode) {
  return mode == ActionMode::exactly_one ? "exactly_one" : "power_set";
}

struct Variable {
  std::string name;
  VariableKind kind;

  bool operator==(const Variable&) const = default;
};

/// `consequent := antecedent`
struct Mechanism {
  std::string consequent;
  Formula antecedent;

  bool operator==(const Mechanism&) const = default;
};

/// (action, consequence) in the intention relation.
struct Intention {
  std::string action;
  std::string consequence;

  bool operator==(const Intention&) const = default;
};

using Assignment = std::map<std::string, bool, std::less<>>;

struct CausalAgencyModel {
  std::string name;
  std::vector<std::string> actions;
  std::vector<std::string> background;
  // Valuation used for background variables when the caller does not
  // supply one. Variables missing here read as false.
  Assignment background_defaults;
  std::vector<std::string> consequences;
  std::vector<Mechanism> mechanisms;
  std::map<std::string, double, std::less<>> utilities;
  std::vector<Intention> intentions;
  ActionMode mode = ActionMode::power_set;
  // Consequences whose mechanism was removed by an intervention, with the
  // value they were fixed to. Empty for models built from source.
  Assignment pinned;

  bool operator==(const CausalAgencyModel&) const = default;

  /// Unlisted variables have utility 0.
  double utility(std::string_view var) const {
    auto it = utilities.find(var);
    return it == utilities.end() ? 0.0 : it->second;
  }

  std::optional<VariableKind> kind_of(std::string_view var) const {
    auto in = [var](const std::vector<std::string>& names) {
      for (const auto& n : names)
        if (n == var) return true;
      return false;
    };
    if (in(actions)) return VariableKind::action;
    if (in(background)) return VariableKind::background;
    if (in(consequences)) return VariableKind::consequence;
    return std::nullopt;
  }

  const Mechanism* mechanism_for(std::string_view consequence) const {
    for (const auto& m : mechanisms)
      if (m.consequent == consequence) return &m;
    return nullptr;
  }

  /// A ∪ B ∪ C in declaration order.
  std::vector<Variable> variables() const {
    std::vector<Variable> out;
    for (const auto& n : actions) out.push_back({n, VariableKind::action});
    for (const auto& n : background) out.push_back({n, VariableKind::background});
    for (const auto& n : consequences)
      out.push_back({n, VariableKind::consequence});
    return out;
  }

  Assignment default_background() const {
    Assignment out;
    for (const auto& b : background) {
      auto it = background_defaults.find(b);
      out[b] = it != background_defaults.end() && it->second;
    }
    return out;
  }
};

/// An interpretation of A ∪ B together with the consequence valuation the
/// mechanisms derive from it.
struct World {
  Assignment assignment;
  Assignment derived;

  bool operator==(const World&) const = default;

  bool value(std::string_view var) const {
    if (auto it = assignment.find(var); it != assignment.end()) return it->second;
    if (auto it = derived.find(var); it != derived.end()) return it->second;
    throw Error(ErrorKind::unknown_name,
                "unknown variable '" + std::string(var) + "'");
  }

  /// Assignment and derived values merged into one map.
  Assignment valuation() const {
    Assignment out = assignment;
    out.insert(derived.begin(), derived.end());
    return out;
  }
};

namespace detail {

// Consequence -> consequences its antecedent mentions, using the first
// mechanism per consequent. Pinned consequences have no dependencies.
inline std::vector<std::vector<std::size_t>> consequence_dependencies(
    const CausalAgencyModel& model) {
  const auto& cs = model.consequences;
  std::vector<std::vector<std::size_t>> deps(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (model.pinned.count(cs[i]) != 0) continue;
    const Mechanism* m = model.mechanism_for(cs[i]);
    if (m == nullptr) continue;
    for (const auto& ref : m->antecedent.variables())
      for (std::size_t j = 0; j < cs.size(); ++j)
        if (cs[j] == ref) deps[i].push_back(j);
  }
  return deps;
}

// Elementary cycles reachable by DFS in declaration order, each rotated to
// start at its earliest-declared member and reported once.
inline std::vector<std::vector<std::string>> find_cycles(
    const CausalAgencyModel& model) {
  const auto deps = consequence_dependencies(model);
  const std::size_t n = deps.size();
  enum class Mark { fresh, active, done };
  std::vector<Mark> mark(n, Mark::fresh);
  std::vector<std::size_t> stack;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::string>> cycles;

  auto visit = [&](auto&& self, std::size_t node) -> void {
    mark[node] = Mark::active;
    stack.push_back(node);
    for (std::size_t next : deps[node]) {
      if (mark[next] == Mark::active) {
        std::vector<std::size_t> cycle;
        auto it = std::find(stack.begin(), stack.end(), next);
        cycle.assign(it, stack.end());
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()),
                    cycle.end());
        if (seen.insert(cycle).second) {
          std::vector<std::string> names;
          for (std::size_t k : cycle) names.push_back(model.consequences[k]);
          cycles.push_back(std::move(names));
        }
      } else if (mark[next] == Mark::fresh) {
        self(self, next);
      }
    }
    stack.pop_back();
    mark[node] = Mark::done;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (mark[i] == Mark::fresh) visit(visit, i);
  return cycles;
}

}  // namespace detail

/// Consequence indices in evaluation order: a consequence comes after every
/// consequence its antecedent mentions; among ready consequences the
/// earliest-declared goes first. Throws on a dependency cycle.
inline std::vector<std::size_t> evaluation_order(const CausalAgencyModel& model) {
  const auto deps = detail::consequence_dependencies(model);
  const std::size_t n = deps.size();
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (order.size() < n) {
    bool progressed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (std::size_t d : deps[i]) ready = ready && placed[d];
      if (!ready) continue;
      placed[i] = true;
      order.push_back(i);
      progressed = true;
      break;
    }
    if (!progressed)
      throw Error(ErrorKind::invalid_argument,
                  "model '" + model.name + "' has a mechanism cycle");
  }
  return order;
}

inline ValidationReport validate_model(const CausalAgencyModel& model) {
  ValidationReport report;
  auto add = [&report](ViolationCode code, std::string message,
                       std::vector<std::string> subjects) {
    report.violations.push_back({code, std::move(message), std::move(subjects)});
  };

  std::map<std::string, int, std::less<>> occurrences;
  for (const auto& v : model.variables()) ++occurrences[v.name];
  for (const auto& v : model.variables()) {
    auto it = occurrences.find(v.name);
    if (it->second > 1) {
      add(ViolationCode::duplicate_name,
          "variable '" + v.name + "' is declared " +
              std::to_string(it->second) + " times",
          {v.name});
      it->second = 0;
    }
  }

  std::map<std::string, int, std::less<>> mechanism_count;
  for (const auto& m : model.mechanisms) {
    const auto kind = model.kind_of(m.consequent);
    if (kind != VariableKind::consequence) {
      add(ViolationCode::mechanism_for_non_consequence,
          "mechanism defines '" + m.consequent + "', which is not a consequence",
          {m.consequent});
    } else if (++mechanism_count[m.consequent] == 2) {
      add(ViolationCode::duplicate_mechanism,
          "consequence '" + m.consequent + "' has more than one mechanism",
          {m.consequent});
    }
    for (const auto& ref : m.antecedent.variables())
      if (!model.kind_of(ref))
        add(ViolationCode::undeclared_reference,
            "mechanism for '" + m.consequent + "' references undeclared '" +
                ref + "'",
            {m.consequent, ref});
  }
  for (const auto& c : model.consequences)
    if (mechanism_count.count(c) == 0 && model.pinned.count(c) == 0)
      add(ViolationCode::missing_mechanism,
          "consequence '" + c + "' has no mechanism", {c});

  for (const auto& [var, u] : model.utilities) {
    if (!model.kind_of(var))
      add(ViolationCode::undeclared_reference,
          "utility assigned to undeclared '" + var + "'", {var});
    if (!std::isfinite(u))
      add(ViolationCode::non_finite_utility,
          "utility of '" + var + "' is not finite", {var});
  }

  for (const auto& i : model.intentions) {
    if (model.kind_of(i.action) != VariableKind::action ||
        model.kind_of(i.consequence) != VariableKind::consequence)
      add(ViolationCode::bad_intention,
          "intention " + i.action + " -> " + i.consequence +
              " must pair an action with a consequence",
          {i.action, i.consequence});
  }

  for (const auto& [var, value] : model.background_defaults)
    if (model.kind_of(var) != VariableKind::background)
      add(ViolationCode::undeclared_reference,
          "background value given for '" + var +
              "', which is not a background variable",
          {var});
  for (const auto& [var, value] : model.pinned)
    if (model.kind_of(var) != VariableKind::consequence)
      add(ViolationCode::undeclared_reference,
          "pinned value given for '" + var + "', which is not a consequence",
          {var});

  for (auto& cycle : detail::find_cycles(model))
    add(ViolationCode::mechanism_cycle,
        "mechanism cycle: " + detail::join(cycle, " -> ") + " -> " + cycle.front(),
        cycle);

  return report;
}

/// Derives the consequence valuation for a total assignment over A ∪ B.
inline World evaluate(const CausalAgencyModel& model, Assignment assignment) {
  std::vector<std::string> missing;
  for (const auto& n : model.actions)
    if (assignment.count(n) == 0) missing.push_back(n);
  for (const auto& n : model.background)
    if (assignment.count(n) == 0) missing.push_back(n);
  if (!missing.empty())
    throw Error(ErrorKind::incomplete_assignment,
                "assignment is missing " + detail::join(missing));
  for (const auto& [n, v] : assignment) {
    const auto kind = model.kind_of(n);
    if (kind != VariableKind::action && kind != VariableKind::background)
      throw Error(ErrorKind::unknown_name,
                  "'" + n + "' is not an action or background variable of '" +
                      model.name + "'");
  }

  World world;
  world.assignment = std::move(assignment);
  const auto lookup = [&world](const std::string& var) {
    if (auto it = world.assignment.find(var); it != world.assignment.end())
      return it->second;
    return world.derived.at(var);
  };
  for (std::size_t i : evaluation_order(model)) {
    const auto& c = model.consequences[i];
    if (auto pin = model.pinned.find(c); pin != model.pinned.end()) {
      world.derived[c] = pin->second;
      continue;
    }
    const Mechanism* m = model.mechanism_for(c);
    if (m == nullptr)
      throw Error(ErrorKind::invalid_argument,
                  "consequence '" + c + "' has no mechanism");
    world.derived[c] = m->antecedent.evaluate(lookup);
  }
  return world;
}

struct Intervention {
  CausalAgencyModel model;
  World world;
};

/// Flips `target`. For a consequence the mechanism is dropped and the value
/// pinned; for an action or background variable the assignment is flipped.
/// Inputs are left untouched.
inline Intervention intervene(const CausalAgencyModel& model, const World& world,
                              std::string_view target) {
  const auto kind = model.kind_of(target);
  if (!kind)
    throw Error(ErrorKind::unknown_name,
                "cannot intervene on unknown variable '" + std::string(target) +
                    "'");
  Intervention out{model, {}};
  if (*kind == VariableKind::consequence) {
    const bool flipped = !world.value(target);
    std::erase_if(out.model.mechanisms, [target](const Mechanism& m) {
      return m.consequent == target;
    });
    out.model.pinned[std::string(target)] = flipped;
    out.world = evaluate(out.model, world.assignment);
  } else {
    Assignment flipped = world.assignment;
    auto it = flipped.find(target);
    if (it == flipped.end())
      throw Error(ErrorKind::foreign_world,
                  "world does not assign '" + std::string(target) + "'");
    it->second = !it->second;
    out.world = evaluate(out.model, std::move(flipped));
  }
  return out;
}

struct CausalWitness {
  std::string cause;
  std::string effect;
  Assignment factual;         // full valuation before the intervention
  Assignment counterfactual;  // full valuation after flipping `cause`

  bool operator==(const CausalWitness&) const = default;
};

enum class CauseVerdict { cause, cause_false, effect_false, effect_survives };

inline const char* to_string(CauseVerdict v) {
  switch (v) {
    case CauseVerdict::cause: return "cause";
    case CauseVerdict::cause_false: return "cause_false";
    case CauseVerdict::effect_false: return "effect_false";
    case CauseVerdict::effect_survives: return "effect_survives";
  }
  return "unknown";
}

struct CausalQuery {
  CauseVerdict verdict;
  std::optional<CausalWitness> witness;  // set exactly when verdict == cause

  explicit operator bool() const { return verdict == CauseVerdict::cause; }
};

/// But-for causality: `cause` and `effect` hold, and `effect` fails once
/// `cause` is flipped. Background causes are accepted here; permissibility
/// checks only ask about actions and consequences.
inline CausalQuery is_cause(const CausalAgencyModel& model, const World& world,
                            std::string_view cause, std::string_view effect) {
  if (!model.kind_of(cause))
    throw Error(ErrorKind::unknown_name,
                "unknown cause variable '" + std::string(cause) + "'");
  if (model.kind_of(effect) != VariableKind::consequence)
    throw Error(ErrorKind::unknown_name,
                "'" + std::string(effect) + "' is not a consequence of '" +
                    model.name + "'");
  if (!world.value(cause)) return {CauseVerdict::cause_false, std::nullopt};
  if (!world.value(effect)) return {CauseVerdict::effect_false, std::nullopt};
  const auto flipped = intervene(model, world, cause);
  if (flipped.world.value(effect))
    return {CauseVerdict::effect_survives, std::nullopt};
  return {CauseVerdict::cause,
          CausalWitness{std::string(cause), std::string(effect),
                        world.valuation(), flipped.world.valuation()}};
}

}  // namespace ethica
