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

#include <gtest/gtest.h>

#include "ethica/verifier.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

namespace {

using namespace ethica;
using E = PropertyExpr;

E atom(std::string name, std::vector<std::string> args = {}) {
  return E::atom({std::move(name), std::move(args)});
}

PropertySpec forall(std::string name, E cond) {
  return {std::move(name), Quantifier::forall, std::move(cond)};
}

PropertySpec exists(std::string name, E cond) {
  return {std::move(name), Quantifier::exists, std::move(cond)};
}

EthicalPolicy ua_policy() {
  return EthicalPolicy::with_vacuous_top("UA", {{"f1", "", false, 4},
                                                {"f2", "", false, 3},
                                                {"f3", "", false, 2},
                                                {"f4", "", false, 1}});
}

ScenarioSpace ua_space(bool double_f4 = false) {
  std::vector<PlanCandidate> plans{{"power_lines_field", {"f4"}},
                                   {"people_field", {"f1"}},
                                   {"road", {"f4"}},
                                   {"empty_field", {}}};
  if (double_f4) plans[0].violations.push_back("f4");
  return {"ua", AvailabilitySpace{ua_policy(), plans}};
}

ScenarioSpace asimov(std::vector<std::size_t> order = {}) {
  return {"asimov", GovernorSpace{3, 3, std::move(order)}};
}

ScenarioSpace smarthome_space() {
  return {"smarthome", PdeBackgroundSpace{testing_support::smarthome(), {"fire", "daylight"}, {}}};
}

const PropertySpec kDominance =
    forall("dominance", E::disj(atom("cycle"), atom("lex_dominance")));

// Field-by-field equality, ignoring wall time.
void expect_same_report(const VerificationReport& a, const VerificationReport& b) {
  EXPECT_EQ(a.property, b.property);
  EXPECT_EQ(a.space, b.space);
  EXPECT_EQ(a.scenarios_total, b.scenarios_total);
  EXPECT_EQ(a.scenarios_checked, b.scenarios_checked);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.violations_found, b.violations_found);
  EXPECT_EQ(a.counterexamples, b.counterexamples);
  EXPECT_EQ(a.witness, b.witness);
}

// The dominance property computed from scratch for a governor scanning
// laws in `order`: selection by fewest defeats, cycle when it has any.
bool dominance_oracle(const LawAnnotationSet& a, const std::vector<std::size_t>& order) {
  const std::size_t s = oracle::select(a, order);
  bool cycle = false;
  for (std::size_t t = 0; t < a.n_tasks(); ++t)
    cycle = cycle || (t != s && oracle::lex(a, t, s, order) == -1);
  if (cycle) return true;
  for (std::size_t t = 0; t < a.n_tasks(); ++t) {
    if (t == s) continue;
    for (std::size_t k = 0; k < a.n_laws(); ++k) {
      if (!a.prefers(k, t, s)) continue;
      bool justified = false;
      for (std::size_t j = 0; j < k; ++j) justified = justified || a.prefers(j, s, t);
      if (!justified) return false;
    }
  }
  return true;
}

TEST(EnumerateScenarios, Sizes) {
  EXPECT_EQ(enumerate_scenarios(ua_space()).size(), 15u);
  EXPECT_EQ(enumerate_scenarios(asimov()).size(), 19683u);
  EXPECT_EQ(enumerate_scenarios(smarthome_space()).size(), 4u);
  EXPECT_EQ(asimov().size(), LawAnnotationSet::space_size(3, 3));
}

TEST(EnumerateScenarios, CanonicalOrders) {
  const auto pde = enumerate_scenarios(smarthome_space());
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto& bg = std::get<PdeScenario>(pde[i].data).background;
    EXPECT_EQ(bg.at("fire"), (i & 1U) != 0);
    EXPECT_EQ(bg.at("daylight"), (i & 2U) != 0);
    EXPECT_EQ(pde[i].index, i);
  }
  const auto ua = enumerate_scenarios(ua_space());
  EXPECT_EQ(std::get<AvailabilityScenario>(ua.front().data).mask, 1u);
  EXPECT_EQ(std::get<AvailabilityScenario>(ua.back().data).mask, 15u);
  std::set<std::uint64_t> masks;
  for (const auto& s : ua) masks.insert(std::get<AvailabilityScenario>(s.data).mask);
  EXPECT_EQ(masks.size(), 15u);
  EXPECT_EQ(std::get<LawAnnotationSet>(scenario_at(asimov(), 100).data).index(), 100u);
  EXPECT_THROW(scenario_at(ua_space(), 15), Error);
}

TEST(EnumerateScenarios, FixedValuesAndDefaults) {
  ScenarioSpace s{"s", PdeBackgroundSpace{testing_support::smarthome(), {}, {{"daylight", true}}}};
  const auto all = enumerate_scenarios(s);
  ASSERT_EQ(all.size(), 1u);
  const auto& bg = std::get<PdeScenario>(all[0].data).background;
  EXPECT_TRUE(bg.at("fire"));
  EXPECT_TRUE(bg.at("daylight"));
}

TEST(CheckProperty, AsimovDominanceHoldsExhaustively) {
  const auto r = check_property(asimov(), kDominance);
  EXPECT_EQ(r.outcome, Outcome::holds);
  EXPECT_EQ(r.scenarios_checked, 19683u);
  EXPECT_EQ(r.violations_found, 0u);
  EXPECT_TRUE(r.counterexamples.empty());
  for (const auto& a : enumerate_annotations(3, 3))
    ASSERT_TRUE(dominance_oracle(a, oracle::natural_order(3)));
}

TEST(CheckProperty, ReversedLawOrderIsCaught) {
  const std::vector<std::size_t> reversed{2, 1, 0};
  const auto r = check_property(asimov(reversed), kDominance);
  ASSERT_EQ(r.outcome, Outcome::fails);
  ASSERT_FALSE(r.counterexamples.empty());

  std::uint64_t failures = 0;
  std::optional<std::uint64_t> first;
  for (const auto& a : enumerate_annotations(3, 3))
    if (!dominance_oracle(a, reversed)) {
      ++failures;
      if (!first) first = a.index();
    }
  EXPECT_EQ(r.violations_found, failures);
  EXPECT_EQ(r.counterexamples.front().scenario.index, *first);
  EXPECT_EQ(r.counterexamples.size(), std::min<std::uint64_t>(failures, 10));

  // The same mutant injected through the evaluator.
  Evaluator mutant;
  mutant.governor = [](const LawAnnotationSet& a) { return Governor::reversed(3).select(a); };
  const auto r2 = check_property(asimov(), kDominance, mutant);
  EXPECT_EQ(r2.violations_found, failures);
}

TEST(CheckProperty, ThirdLawOnlyVariantMissesTheMutant) {
  // Restricted to law 3, the check cannot see a reversed governor: any
  // selection beaten at law 3 by an unjustified rival is in a cycle.
  const auto p = forall("l3", E::disj(atom("cycle"), atom("justified", {"l3"})));
  EXPECT_EQ(check_property(asimov(), p).outcome, Outcome::holds);
  EXPECT_EQ(check_property(asimov({2, 1, 0}), p).outcome, Outcome::holds);
}

TEST(CheckProperty, CounterexamplesReplay) {
  const auto space = asimov({2, 1, 0});
  const auto r = check_property(space, kDominance, {}, {100, 1});
  ASSERT_FALSE(r.counterexamples.empty());
  for (const auto& c : r.counterexamples) {
    const auto again = evaluate_scenario(space, kDominance, {}, c.scenario.index);
    EXPECT_FALSE(again.condition);
    EXPECT_EQ(again, c);
  }
  for (std::size_t i = 1; i < r.counterexamples.size(); ++i)
    EXPECT_LT(r.counterexamples[i - 1].scenario.index, r.counterexamples[i].scenario.index);
}

TEST(CheckProperty, UaPropertiesHold) {
  const auto road = forall("road", E::implies(atom("selected", {"road"}),
                                            E::negate(atom("available", {"empty_field"}))));
  const auto people = forall("people", E::implies(atom("selected", {"people_field"}),
                                                  atom("only_available", {"people_field"})));
  const auto empty = forall("empty", E::implies(atom("available", {"empty_field"}),
                                                atom("selected", {"empty_field"})));
  for (bool variant : {false, true}) {
    for (const auto& p : {road, people, empty}) {
      const auto r = check_property(ua_space(variant), p);
      EXPECT_EQ(r.outcome, Outcome::holds) << p.name;
      EXPECT_EQ(r.scenarios_checked, 15u);
    }
  }
}

TEST(CheckProperty, UaSelectionsMatchBruteForce) {
  const auto space = ua_space();
  const auto& d = std::get<AvailabilitySpace>(space.definition);
  const auto any = forall("any", E::constant(true));
  for (std::uint64_t i = 0; i < 15; ++i) {
    const auto out = evaluate_scenario(space, any, {}, i);
    const auto& av = std::get<AvailabilityScenario>(out.scenario.data).available;
    std::size_t best = 0;
    for (std::size_t k = 1; k < av.size(); ++k)
      if (oracle::compare_plans(d.policy, av[k].violations, av[best].violations) < 0) best = k;
    EXPECT_EQ(std::get<PlanSelection>(out.trace).selected.id, av[best].id);
  }
}

TEST(CheckProperty, SmartHomeEvacuationPropertiesFail) {
  const auto always = forall("always", E::implies(atom("fact", {"fire"}),
                                                  atom("permitted", {"evacuation_attempt"})));
  const auto r = check_property(smarthome_space(), always);
  EXPECT_EQ(r.outcome, Outcome::fails);
  EXPECT_EQ(r.scenarios_checked, 4u);
  ASSERT_EQ(r.counterexamples.size(), 2u);
  EXPECT_EQ(r.counterexamples[0].scenario.index, 1u);  // fire, dark
  EXPECT_EQ(r.counterexamples[1].scenario.index, 3u);  // fire, daylight

  ScenarioSpace fire{"fire", PdeBackgroundSpace{testing_support::smarthome(), {},
                                                {{"fire", true}, {"daylight", false}}}};
  const auto some = exists("some", atom("permitted", {"evacuation_attempt"}));
  const auto r2 = check_property(fire, some);
  EXPECT_EQ(r2.outcome, Outcome::fails);
  EXPECT_FALSE(r2.witness.has_value());
  EXPECT_EQ(r2.scenarios_checked, 1u);
}

TEST(CheckProperty, ExistsStopsAtFirstWitness) {
  const auto p = exists("night", E::negate(atom("fact", {"daylight"})));
  const auto r = check_property(smarthome_space(), p);
  EXPECT_EQ(r.outcome, Outcome::holds);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->scenario.index, 0u);
  EXPECT_EQ(r.scenarios_checked, 1u);
  const auto q = exists("fire_day", E::conj(atom("fact", {"fire"}), atom("fact", {"daylight"})));
  const auto r2 = check_property(smarthome_space(), q, {}, {10, 3});
  EXPECT_EQ(r2.witness->scenario.index, 3u);
  EXPECT_EQ(r2.scenarios_checked, 4u);
}

TEST(CheckProperty, GovernorAtoms) {
  // selected(t1) whenever t1 beats both others.
  const auto p = forall("p", E::implies(E::conj(atom("beats", {"t1", "t2"}),
                                                atom("beats", {"t1", "t3"})),
                                        atom("selected", {"t1"})));
  EXPECT_EQ(check_property(asimov(), p).outcome, Outcome::holds);
  const auto q = forall("q", E::implies(atom("prefers", {"l1", "t2", "t1"}),
                                        E::negate(atom("selected", {"t1"}))));
  EXPECT_EQ(check_property(asimov(), q).outcome, Outcome::fails);  // cycles select t1
}

TEST(CheckProperty, UnresolvableAtomsAreErrors) {
  auto expect_named = [](const ScenarioSpace& s, const PropertySpec& p, const std::string& name) {
    try {
      check_property(s, p);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::unknown_name);
      EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
    }
  };
  expect_named(ua_space(), forall("p", atom("selected", {"runway"})), "runway");
  expect_named(asimov(), forall("p", atom("selected", {"t4"})), "t4");
  expect_named(smarthome_space(), forall("p", atom("fact", {"smoke"})), "smoke");
  expect_named(smarthome_space(), forall("p", atom("landed")), "landed");
  expect_named(ua_space(), forall("p", atom("cycle")), "cycle");
}

TEST(CheckProperty, BadSpacesAndOptions) {
  EXPECT_THROW(check_property(asimov({0, 0, 1}), kDominance), Error);
  EXPECT_THROW(check_property(asimov({0, 1}), kDominance), Error);
  ScenarioSpace bad{"bad", PdeBackgroundSpace{testing_support::smarthome(), {"lights_on"}, {}}};
  EXPECT_THROW(check_property(bad, forall("p", E::constant(true))), Error);
  auto dup = ua_space();
  std::get<AvailabilitySpace>(dup.definition).plans.push_back({"road", {}});
  EXPECT_THROW(check_property(dup, forall("p", E::constant(true))), Error);
  EXPECT_THROW(check_property(ua_space(), forall("p", E::constant(true)), {}, {10, 0}), Error);
  EXPECT_THROW(check_property(ua_space(), forall("p", E::constant(true)), {}, {0, 1}), Error);
}

TEST(CheckProperty, CapLimitsKeptCounterexamplesOnly) {
  const auto r = check_property(asimov({2, 1, 0}), kDominance, {}, {3, 1});
  EXPECT_EQ(r.counterexamples.size(), 3u);
  EXPECT_GT(r.violations_found, 3u);
}

TEST(CheckProperty, WorkerCountDoesNotChangeTheReport) {
  const auto mutant = asimov({2, 1, 0});
  const auto base = check_property(mutant, kDominance);
  const auto ex = exists("e", E::conj(atom("cycle"), atom("selected", {"t2"})));
  const auto base_ex = check_property(asimov(), ex);
  for (std::size_t workers : {2u, 3u, 4u, 7u, 16u}) {
    expect_same_report(base, check_property(mutant, kDominance, {}, {10, workers}));
    expect_same_report(base_ex, check_property(asimov(), ex, {}, {10, workers}));
  }
  // More workers than scenarios.
  const auto ua = forall("p", E::constant(true));
  expect_same_report(check_property(ua_space(), ua), check_property(ua_space(), ua, {}, {10, 64}));
}

TEST(VerifySuite, EmptySuiteSucceeds) {
  const auto reports = verify_suite(std::span<const SuiteEntry>{});
  EXPECT_TRUE(reports.empty());
  EXPECT_TRUE(all_hold(reports));
}

TEST(VerifySuite, ReportsInSuiteOrder) {
  const std::vector<SuiteEntry> suite{
      {ua_space(), forall("road", E::implies(atom("selected", {"road"}),
                                             E::negate(atom("available", {"empty_field"}))))},
      {ua_space(), forall("people", E::implies(atom("selected", {"people_field"}),
                                               atom("only_available", {"people_field"})))},
      {asimov(), kDominance}};
  const auto reports = verify_suite(suite);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_EQ(reports[0].property, "road");
  EXPECT_EQ(reports[2].property, "dominance");
  EXPECT_TRUE(all_hold(reports));
}

}  // namespace
