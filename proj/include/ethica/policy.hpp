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

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ethica/error.hpp"
#include "ethica/validation.hpp"

namespace ethica {

inline constexpr std::string_view kVacuousPrinciple = "vacuous";

struct Principle {
  std::string id;
  std::string description;
  bool is_vacuous = false;
  // Severity: higher is more unethical to violate, equal ranks are
  // equally unethical.
  long rank = 0;

  bool operator==(const Principle&) const = default;
};

struct EthicalPolicy {
  std::string name;
  std::vector<Principle> principles;

  bool operator==(const EthicalPolicy&) const = default;

  /// Builds a policy from non-vacuous principles and appends the vacuous
  /// principle one rank above the most severe of them.
  static EthicalPolicy with_vacuous_top(std::string name,
                                        std::vector<Principle> principles) {
    long top = 0;
    for (const auto& p : principles) top = std::max(top, p.rank);
    principles.push_back(
        {std::string(kVacuousPrinciple), "vacuously satisfied", true, top + 1});
    return {std::move(name), std::move(principles)};
  }

  const Principle* find(std::string_view id) const {
    for (const auto& p : principles)
      if (p.id == id) return &p;
    return nullptr;
  }

  /// Principles other than the vacuous one, in declaration order.
  std::vector<Principle> substantive() const {
    std::vector<Principle> out;
    for (const auto& p : principles)
      if (!p.is_vacuous) out.push_back(p);
    return out;
  }
};

struct PlanCandidate {
  std::string id;
  std::vector<std::string> violations;  // multiset of principle ids

  bool operator==(const PlanCandidate&) const = default;
};

inline ValidationReport validate_policy(const EthicalPolicy& policy) {
  ValidationReport report;
  std::set<std::string, std::less<>> ids;
  for (const auto& p : policy.principles)
    if (!ids.insert(p.id).second)
      report.violations.push_back({ViolationCode::duplicate_name,
                                   "principle '" + p.id + "' declared twice",
                                   {p.id}});

  std::vector<const Principle*> vacuous;
  for (const auto& p : policy.principles)
    if (p.is_vacuous) vacuous.push_back(&p);
  if (vacuous.empty()) {
    report.violations.push_back({ViolationCode::missing_vacuous_principle,
                                 "policy '" + policy.name +
                                     "' has no vacuous principle",
                                 {policy.name}});
    return report;
  }
  if (vacuous.size() > 1)
    report.violations.push_back({ViolationCode::multiple_vacuous_principles,
                                 "policy '" + policy.name +
                                     "' has more than one vacuous principle",
                                 {policy.name}});
  for (const auto& p : policy.principles) {
    if (p.is_vacuous || p.rank < vacuous.front()->rank) continue;
    report.violations.push_back(
        {ViolationCode::vacuous_not_maximal,
         "vacuous principle must rank strictly above '" + p.id + "'",
         {vacuous.front()->id, p.id}});
  }
  return report;
}

enum class PlanOrdering { a_better, b_better, equal };

inline const char* to_string(PlanOrdering o) {
  switch (o) {
    case PlanOrdering::a_better: return "a_better";
    case PlanOrdering::b_better: return "b_better";
    case PlanOrdering::equal: return "equal";
  }
  return "unknown";
}

struct PlanComparison {
  PlanOrdering ordering = PlanOrdering::equal;
  std::optional<long> decided_at_rank;  // unset when equal

  bool operator==(const PlanComparison&) const = default;
};

/// Violation counts per distinct severity rank, most severe first.
inline std::vector<std::pair<long, std::size_t>> violation_profile(
    const EthicalPolicy& policy, const PlanCandidate& plan) {
  std::map<long, std::size_t, std::greater<>> counts;
  for (const auto& p : policy.principles)
    if (!p.is_vacuous) counts.emplace(p.rank, 0);
  for (const auto& v : plan.violations) {
    const Principle* p = policy.find(v);
    if (p == nullptr)
      throw Error(ErrorKind::unknown_name, "plan '" + plan.id +
                                               "' violates unknown principle '" +
                                               v + "'");
    if (p->is_vacuous)
      throw Error(ErrorKind::invalid_argument,
                  "plan '" + plan.id + "' cannot violate the vacuous principle");
    ++counts[p->rank];
  }
  return {counts.begin(), counts.end()};
}

/// Severity-major lexicographic comparison: at the most severe rank where
/// the two plans' violation counts differ, the plan with fewer wins.
inline PlanComparison compare_plans(const EthicalPolicy& policy,
                                    const PlanCandidate& a,
                                    const PlanCandidate& b) {
  const auto pa = violation_profile(policy, a);
  const auto pb = violation_profile(policy, b);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].second == pb[i].second) continue;
    return {pa[i].second < pb[i].second ? PlanOrdering::a_better
                                        : PlanOrdering::b_better,
            pa[i].first};
  }
  return {};
}

struct PlanRejection {
  std::string plan;
  std::optional<long> lost_at_rank;  // unset: equal to the selection, lost the tie-break

  bool operator==(const PlanRejection&) const = default;
};

struct PlanSelection {
  std::size_t index = 0;
  PlanCandidate selected;
  std::vector<PlanRejection> justification;  // candidate order, selection omitted

  bool operator==(const PlanSelection&) const = default;
};

/// Picks the earliest candidate that no other candidate beats.
inline PlanSelection select_plan(const EthicalPolicy& policy,
                                 std::span<const PlanCandidate> candidates) {
  if (candidates.empty())
    throw Error(ErrorKind::empty_input, "no candidate plans to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (compare_plans(policy, candidates[i], candidates[best]).ordering ==
        PlanOrdering::a_better)
      best = i;

  PlanSelection selection{best, candidates[best], {}};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i == best) continue;
    const auto cmp = compare_plans(policy, candidates[best], candidates[i]);
    selection.justification.push_back({candidates[i].id, cmp.decided_at_rank});
  }
  return selection;
}

}  // namespace ethica
