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

// Exhaustive scenario checking.
//
// A ScenarioSpace is a finite, indexable family of inputs for one of the
// reasoners (background valuations for a causal agency model, annotation
// sets for the governor, plan availability subsets for a policy). A
// PropertySpec is a propositional condition over scenario atoms with a
// forall/exists quantifier. check_property walks the space in canonical
// index order and folds the results into a VerificationReport.
//
// Canonical orders:
//   pde_backgrounds       bit i of the index is the value of vary[i]
//   governor_annotations  LawAnnotationSet::from_index
//   plan_availability     index k is the availability mask k + 1, bit i
//                         for the i-th plan (empty set excluded)
//
// Atoms per kind:
//   pde_backgrounds       fact(b), permissible(a...), permitted(a),
//                         any_permissible()
//   governor_annotations  selected(tK), prefers(lK, tI, tJ), beats(tI, tJ),
//                         cycle(), justified(lK), lex_dominance()
//   plan_availability     available(p), selected(p), only_available(p)

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ethica/causal_model.hpp"
#include "ethica/error.hpp"
#include "ethica/governor.hpp"
#include "ethica/pde.hpp"
#include "ethica/policy.hpp"
#include "ethica/property.hpp"

namespace ethica {

enum class SpaceKind { pde_backgrounds, governor_annotations, plan_availability };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::pde_backgrounds: return "pde_backgrounds";
    case SpaceKind::governor_annotations: return "governor_annotations";
    case SpaceKind::plan_availability: return "plan_availability";
  }
  return "unknown";
}

inline constexpr std::size_t kMaxVariedBackground = 24;
inline constexpr std::size_t kMaxAvailabilityPlans = 24;

struct PdeBackgroundSpace {
  CausalAgencyModel model;
  std::vector<std::string> vary;
  // Values for background variables not varied; anything missing takes the
  // model's default.
  Assignment fixed;
};

struct GovernorSpace {
  std::size_t n_tasks = 3;
  std::size_t n_laws = kAsimovLaws;
  // Law scan order of the governor under test; empty means natural order.
  std::vector<std::size_t> law_order;
};

struct AvailabilitySpace {
  EthicalPolicy policy;
  std::vector<PlanCandidate> plans;
};

struct ScenarioSpace {
  std::string name;
  std::variant<PdeBackgroundSpace, GovernorSpace, AvailabilitySpace> definition;

  SpaceKind kind() const { return static_cast<SpaceKind>(definition.index()); }

  std::uint64_t size() const {
    return std::visit(
        [](const auto& d) -> std::uint64_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, PdeBackgroundSpace>) {
            if (d.vary.size() > kMaxVariedBackground)
              throw Error(ErrorKind::invalid_argument,
                          "too many varied background variables");
            return std::uint64_t{1} << d.vary.size();
          } else if constexpr (std::is_same_v<T, GovernorSpace>) {
            return LawAnnotationSet::space_size(d.n_tasks, d.n_laws);
          } else {
            if (d.plans.size() > kMaxAvailabilityPlans)
              throw Error(ErrorKind::invalid_argument, "too many plans");
            return (std::uint64_t{1} << d.plans.size()) - 1;
          }
        },
        definition);
  }
};

struct PdeScenario {
  Assignment background;

  bool operator==(const PdeScenario&) const = default;
};

struct AvailabilityScenario {
  std::uint64_t mask = 0;
  std::vector<PlanCandidate> available;

  bool operator==(const AvailabilityScenario&) const = default;
};

struct Scenario {
  std::uint64_t index = 0;
  std::variant<PdeScenario, LawAnnotationSet, AvailabilityScenario> data;

  bool operator==(const Scenario&) const = default;
};

inline Scenario scenario_at(const ScenarioSpace& space, std::uint64_t index) {
  if (index >= space.size())
    throw Error(ErrorKind::invalid_argument,
                "scenario index " + std::to_string(index) + " out of range for '" +
                    space.name + "'");
  return std::visit(
      [index](const auto& d) -> Scenario {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PdeBackgroundSpace>) {
          PdeScenario s{d.model.default_background()};
          for (const auto& [name, value] : d.fixed) s.background[name] = value;
          for (std::size_t i = 0; i < d.vary.size(); ++i)
            s.background[d.vary[i]] = ((index >> i) & 1U) != 0;
          return {index, std::move(s)};
        } else if constexpr (std::is_same_v<T, GovernorSpace>) {
          return {index, LawAnnotationSet::from_index(d.n_tasks, d.n_laws, index)};
        } else {
          AvailabilityScenario s{index + 1, {}};
          for (std::size_t i = 0; i < d.plans.size(); ++i)
            if ((s.mask >> i) & 1U) s.available.push_back(d.plans[i]);
          return {index, std::move(s)};
        }
      },
      space.definition);
}

/// Every scenario of `space` in canonical order. Materialises the list;
/// large spaces should be walked by index with scenario_at.
inline std::vector<Scenario> enumerate_scenarios(const ScenarioSpace& space) {
  std::vector<Scenario> out;
  const std::uint64_t n = space.size();
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(scenario_at(space, i));
  return out;
}

/// The reasoners under test. Defaults are the library's own implementations;
/// tests swap in mutants. All callables must be pure.
struct Evaluator {
  std::function<std::vector<PermissibilityVerdict>(const CausalAgencyModel&,
                                                   const Assignment&)>
      pde = [](const CausalAgencyModel& m, const Assignment& b) {
        return permissible_worlds(m, b);
      };
  // Unset: a Governor using the space's law order.
  std::function<TaskSelection(const LawAnnotationSet&)> governor;
  std::function<PlanSelection(const EthicalPolicy&, std::span<const PlanCandidate>)>
      planner = [](const EthicalPolicy& p, std::span<const PlanCandidate> c) {
        return select_plan(p, c);
      };
};

using ScenarioTrace =
    std::variant<std::vector<PermissibilityVerdict>, TaskSelection, PlanSelection>;

struct ScenarioOutcome {
  Scenario scenario;
  ScenarioTrace trace;
  bool condition = false;

  bool operator==(const ScenarioOutcome&) const = default;
};

namespace detail {

inline std::optional<std::size_t> parse_indexed(const std::string& arg, char prefix,
                                                std::size_t count) {
  if (arg.size() < 2 || arg[0] != prefix) return std::nullopt;
  std::size_t value = 0;
  for (std::size_t i = 1; i < arg.size(); ++i) {
    if (arg[i] < '0' || arg[i] > '9') return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(arg[i] - '0');
    if (value > count) return std::nullopt;
  }
  if (value == 0) return std::nullopt;
  return value - 1;
}

inline std::optional<std::size_t> plan_index(const AvailabilitySpace& d,
                                             const std::string& id) {
  for (std::size_t i = 0; i < d.plans.size(); ++i)
    if (d.plans[i].id == id) return i;
  return std::nullopt;
}

// Returns a description of the problem, or empty when the atom resolves.
inline std::string atom_problem(const ScenarioSpace& space, const Atom& atom) {
  const auto arity = [&atom](std::size_t n) {
    return atom.args.size() == n
               ? std::string()
               : "atom " + to_string(atom) + " takes " + std::to_string(n) +
                     " argument" + (n == 1 ? "" : "s");
  };
  const std::string unknown = "unresolvable atom " + to_string(atom) +
                              " for space '" + space.name + "' (" +
                              to_string(space.kind()) + ")";
  return std::visit(
      [&](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PdeBackgroundSpace>) {
          const auto& m = d.model;
          if (atom.name == "fact") {
            if (auto e = arity(1); !e.empty()) return e;
            if (m.kind_of(atom.args[0]) != VariableKind::background)
              return unknown + ": '" + atom.args[0] + "' is not a background variable";
            return {};
          }
          if (atom.name == "permissible" || atom.name == "permitted") {
            if (atom.name == "permitted")
              if (auto e = arity(1); !e.empty()) return e;
            for (const auto& a : atom.args)
              if (m.kind_of(a) != VariableKind::action)
                return unknown + ": '" + a + "' is not an action";
            return {};
          }
          if (atom.name == "any_permissible") return arity(0);
        } else if constexpr (std::is_same_v<T, GovernorSpace>) {
          const auto task = [&](const std::string& a) {
            return parse_indexed(a, 't', d.n_tasks).has_value();
          };
          const auto law = [&](const std::string& a) {
            return parse_indexed(a, 'l', d.n_laws).has_value();
          };
          if (atom.name == "selected") {
            if (auto e = arity(1); !e.empty()) return e;
            return task(atom.args[0]) ? "" : unknown + ": bad task '" + atom.args[0] + "'";
          }
          if (atom.name == "prefers") {
            if (auto e = arity(3); !e.empty()) return e;
            if (!law(atom.args[0])) return unknown + ": bad law '" + atom.args[0] + "'";
            if (!task(atom.args[1]) || !task(atom.args[2]) ||
                atom.args[1] == atom.args[2])
              return unknown + ": needs two distinct tasks";
            return {};
          }
          if (atom.name == "beats") {
            if (auto e = arity(2); !e.empty()) return e;
            if (!task(atom.args[0]) || !task(atom.args[1]) ||
                atom.args[0] == atom.args[1])
              return unknown + ": needs two distinct tasks";
            return {};
          }
          if (atom.name == "justified") {
            if (auto e = arity(1); !e.empty()) return e;
            return law(atom.args[0]) ? "" : unknown + ": bad law '" + atom.args[0] + "'";
          }
          if (atom.name == "cycle" || atom.name == "lex_dominance") return arity(0);
        } else {
          if (atom.name == "available" || atom.name == "selected" ||
              atom.name == "only_available") {
            if (auto e = arity(1); !e.empty()) return e;
            if (!plan_index(d, atom.args[0]))
              return unknown + ": no plan '" + atom.args[0] + "'";
            return {};
          }
        }
        return unknown;
      },
      space.definition);
}

inline bool resolve_atom(const ScenarioSpace& space, const Scenario& scenario,
                         const ScenarioTrace& trace, const Atom& atom) {
  switch (space.kind()) {
    case SpaceKind::pde_backgrounds: {
      const auto& d = std::get<PdeBackgroundSpace>(space.definition);
      const auto& bg = std::get<PdeScenario>(scenario.data).background;
      const auto& verdicts = std::get<std::vector<PermissibilityVerdict>>(trace);
      if (atom.name == "fact") return bg.at(atom.args[0]);
      if (atom.name == "permissible") {
        ActionMask mask = 0;
        for (const auto& a : atom.args)
          for (std::size_t i = 0; i < d.model.actions.size(); ++i)
            if (d.model.actions[i] == a) mask |= ActionMask{1} << i;
        return std::any_of(verdicts.begin(), verdicts.end(), [mask](const auto& v) {
          return v.actions_taken == mask && v.permissible;
        });
      }
      if (atom.name == "permitted")
        return std::any_of(verdicts.begin(), verdicts.end(), [&](const auto& v) {
          return v.permissible && v.world.value(atom.args[0]);
        });
      return std::any_of(verdicts.begin(), verdicts.end(),
                         [](const auto& v) { return v.permissible; });
    }
    case SpaceKind::governor_annotations: {
      const auto& d = std::get<GovernorSpace>(space.definition);
      const auto& ann = std::get<LawAnnotationSet>(scenario.data);
      const auto& sel = std::get<TaskSelection>(trace);
      const auto task = [&](std::size_t i) {
        return *parse_indexed(atom.args[i], 't', d.n_tasks);
      };
      const auto law = [&](std::size_t i) {
        return *parse_indexed(atom.args[i], 'l', d.n_laws);
      };
      if (atom.name == "selected") return sel.selected == task(0);
      if (atom.name == "prefers") return ann.prefers(law(0), task(1), task(2));
      if (atom.name == "beats")
        return lex_compare(ann, task(0), task(1)).ordering == TaskOrdering::first_wins;
      if (atom.name == "cycle") return sel.cycle;
      if (atom.name == "justified")
        return !find_unjustified_preference(ann, sel.selected, law(0));
      return !find_unjustified_preference(ann, sel.selected);
    }
    case SpaceKind::plan_availability: {
      const auto& d = std::get<AvailabilitySpace>(space.definition);
      const auto& av = std::get<AvailabilityScenario>(scenario.data);
      const auto& sel = std::get<PlanSelection>(trace);
      const std::size_t i = *plan_index(d, atom.args[0]);
      const bool available = ((av.mask >> i) & 1U) != 0;
      if (atom.name == "available") return available;
      if (atom.name == "selected") return sel.selected.id == atom.args[0];
      return available && av.mask == (std::uint64_t{1} << i);
    }
  }
  return false;
}

}  // namespace detail

/// Structural problems with a space definition; empty when it can be
/// enumerated.
inline std::vector<std::string> space_problems(const ScenarioSpace& space) {
  std::vector<std::string> out;
  const std::string where = "space '" + space.name + "': ";
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PdeBackgroundSpace>) {
          for (const auto& v : validate_model(d.model).violations)
            out.push_back(where + v.message);
          std::set<std::string, std::less<>> seen;
          for (const auto& v : d.vary) {
            if (d.model.kind_of(v) != VariableKind::background)
              out.push_back(where + "'" + v + "' is not a background variable of '" +
                            d.model.name + "'");
            if (!seen.insert(v).second) out.push_back(where + "'" + v + "' varied twice");
            if (d.fixed.count(v) != 0)
              out.push_back(where + "'" + v + "' is both varied and fixed");
          }
          for (const auto& [v, value] : d.fixed)
            if (d.model.kind_of(v) != VariableKind::background)
              out.push_back(where + "'" + v + "' is not a background variable of '" +
                            d.model.name + "'");
          if (d.vary.size() > kMaxVariedBackground)
            out.push_back(where + "too many varied background variables");
        } else if constexpr (std::is_same_v<T, GovernorSpace>) {
          if (d.n_tasks < 2) out.push_back(where + "needs at least two tasks");
          if (d.n_laws < 1) out.push_back(where + "needs at least one law");
          if (!d.law_order.empty()) {
            std::vector<std::size_t> sorted = d.law_order;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < sorted.size(); ++i)
              if (sorted.size() != d.n_laws || sorted[i] != i) {
                out.push_back(where + "law order must be a permutation of l1..l" +
                              std::to_string(d.n_laws));
                break;
              }
          }
          if (out.empty()) {
            try {
              (void)LawAnnotationSet::space_size(d.n_tasks, d.n_laws);
            } catch (const Error& e) {
              out.push_back(where + e.what());
            }
          }
        } else {
          for (const auto& v : validate_policy(d.policy).violations)
            out.push_back(where + v.message);
          if (d.plans.empty()) out.push_back(where + "has no plans");
          if (d.plans.size() > kMaxAvailabilityPlans)
            out.push_back(where + "too many plans");
          std::set<std::string, std::less<>> seen;
          for (const auto& p : d.plans) {
            if (!seen.insert(p.id).second)
              out.push_back(where + "plan '" + p.id + "' declared twice");
            for (const auto& v : p.violations) {
              const Principle* pr = d.policy.find(v);
              if (pr == nullptr || pr->is_vacuous)
                out.push_back(where + "plan '" + p.id + "' violates unknown principle '" +
                              v + "'");
            }
          }
        }
      },
      space.definition);
  return out;
}

/// Names of atoms in `property` that cannot be resolved against `space`.
inline std::vector<std::string> unresolved_atoms(const ScenarioSpace& space,
                                                 const PropertySpec& property) {
  std::vector<std::string> problems;
  property.condition.for_each_atom([&](const Atom& a) {
    if (auto p = detail::atom_problem(space, a); !p.empty()) problems.push_back(p);
  });
  return problems;
}

inline ScenarioTrace run_evaluator(const ScenarioSpace& space,
                                   const Scenario& scenario,
                                   const Evaluator& evaluator) {
  switch (space.kind()) {
    case SpaceKind::pde_backgrounds:
      return evaluator.pde(std::get<PdeBackgroundSpace>(space.definition).model,
                           std::get<PdeScenario>(scenario.data).background);
    case SpaceKind::governor_annotations: {
      const auto& ann = std::get<LawAnnotationSet>(scenario.data);
      if (evaluator.governor) return evaluator.governor(ann);
      return Governor(std::get<GovernorSpace>(space.definition).law_order).select(ann);
    }
    case SpaceKind::plan_availability:
      return evaluator.planner(std::get<AvailabilitySpace>(space.definition).policy,
                               std::get<AvailabilityScenario>(scenario.data).available);
  }
  throw Error(ErrorKind::invalid_argument, "unknown space kind");
}

/// Runs the evaluator on one scenario and evaluates the property condition.
inline ScenarioOutcome evaluate_scenario(const ScenarioSpace& space,
                                         const PropertySpec& property,
                                         const Evaluator& evaluator,
                                         std::uint64_t index) {
  ScenarioOutcome out{scenario_at(space, index), {}, false};
  out.trace = run_evaluator(space, out.scenario, evaluator);
  out.condition = property.condition.evaluate([&](const Atom& a) {
    return detail::resolve_atom(space, out.scenario, out.trace, a);
  });
  return out;
}

enum class Outcome { holds, fails };

inline const char* to_string(Outcome o) { return o == Outcome::holds ? "holds" : "fails"; }

struct VerificationReport {
  std::string property;
  std::string space;
  SpaceKind kind = SpaceKind::pde_backgrounds;
  Quantifier quantifier = Quantifier::forall;
  std::uint64_t scenarios_total = 0;
  std::uint64_t scenarios_checked = 0;
  Outcome outcome = Outcome::holds;
  // forall: every scenario whose condition was false, of which the first
  // `max_counterexamples` in canonical order are kept.
  std::uint64_t violations_found = 0;
  std::vector<ScenarioOutcome> counterexamples;
  // exists: the first scenario whose condition held.
  std::optional<ScenarioOutcome> witness;
  std::chrono::nanoseconds elapsed{0};
};

struct CheckOptions {
  std::size_t max_counterexamples = 10;
  std::size_t workers = 1;
};

namespace detail {

struct ChunkResult {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::vector<ScenarioOutcome> kept;  // forall: first failures; exists: witness
};

inline ChunkResult check_chunk(const ScenarioSpace& space, const PropertySpec& property,
                               const Evaluator& evaluator, std::uint64_t begin,
                               std::uint64_t end, std::size_t cap) {
  ChunkResult r;
  for (std::uint64_t i = begin; i < end; ++i) {
    auto outcome = evaluate_scenario(space, property, evaluator, i);
    ++r.checked;
    if (property.quantifier == Quantifier::exists) {
      if (outcome.condition) {
        r.kept.push_back(std::move(outcome));
        break;
      }
      continue;
    }
    if (!outcome.condition) {
      ++r.violations;
      if (r.kept.size() < cap) r.kept.push_back(std::move(outcome));
    }
  }
  return r;
}

}  // namespace detail

/// Exhaustively checks `property` over `space`. The report does not depend
/// on the worker count: chunks are contiguous index ranges merged in order.
inline VerificationReport check_property(const ScenarioSpace& space,
                                         const PropertySpec& property,
                                         const Evaluator& evaluator = {},
                                         CheckOptions options = {}) {
  if (auto problems = space_problems(space); !problems.empty())
    throw Error(ErrorKind::invalid_argument, problems.front());
  if (auto problems = unresolved_atoms(space, property); !problems.empty())
    throw Error(ErrorKind::unknown_name, problems.front());
  if (options.workers == 0)
    throw Error(ErrorKind::invalid_argument, "worker count must be at least 1");
  if (options.max_counterexamples == 0)
    throw Error(ErrorKind::invalid_argument,
                "counterexample cap must be at least 1");

  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.property = property.name;
  report.space = space.name;
  report.kind = space.kind();
  report.quantifier = property.quantifier;
  report.scenarios_total = space.size();

  const std::uint64_t n = report.scenarios_total;
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.workers, n));
  std::vector<detail::ChunkResult> chunks(workers);
  std::vector<std::uint64_t> bounds(workers + 1);
  for (std::uint64_t w = 0; w <= workers; ++w) bounds[w] = n * w / workers;

  if (workers == 1) {
    chunks[0] = detail::check_chunk(space, property, evaluator, 0, n,
                                    options.max_counterexamples);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::uint64_t w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          chunks[w] = detail::check_chunk(space, property, evaluator, bounds[w],
                                          bounds[w + 1], options.max_counterexamples);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  if (property.quantifier == Quantifier::forall) {
    for (auto& c : chunks) {
      report.scenarios_checked += c.checked;
      report.violations_found += c.violations;
      for (auto& o : c.kept)
        if (report.counterexamples.size() < options.max_counterexamples)
          report.counterexamples.push_back(std::move(o));
    }
    report.outcome = report.counterexamples.empty() ? Outcome::holds : Outcome::fails;
  } else {
    // Count as if scanned sequentially up to the first witness.
    report.scenarios_checked = n;
    for (std::uint64_t w = 0; w < workers; ++w) {
      if (chunks[w].kept.empty()) continue;
      report.witness = std::move(chunks[w].kept.front());
      report.scenarios_checked = report.witness->scenario.index + 1;
      break;
    }
    report.outcome = report.witness ? Outcome::holds : Outcome::fails;
  }
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

struct SuiteEntry {
  ScenarioSpace space;
  PropertySpec property;
};

/// Reports in suite order.
inline std::vector<VerificationReport> verify_suite(std::span<const SuiteEntry> suite,
                                                    const Evaluator& evaluator = {},
                                                    CheckOptions options = {}) {
  std::vector<VerificationReport> out;
  for (const auto& entry : suite)
    out.push_back(check_property(entry.space, entry.property, evaluator, options));
  return out;
}

inline bool all_hold(std::span<const VerificationReport> reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const auto& r) { return r.outcome == Outcome::holds; });
}

}  // namespace ethica
