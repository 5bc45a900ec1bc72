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

#include <random>

#include "ethica/dsl.hpp"
#include "support/bundles.hpp"
#include "support/models.hpp"

namespace {

using namespace ethica;
using namespace ethica::dsl;
using testing_support::BundleGenerator;
using testing_support::bad_documents;

std::string dump(const ParseResult& r) {
  std::string out;
  for (const auto& d : r.diagnostics) out += d.format() + "\n";
  return out;
}

Bundle parse_ok(const std::string& text) {
  auto r = parse(text);
  EXPECT_TRUE(r.ok()) << dump(r);
  return r.bundle.value_or(Bundle{});
}

TEST(Parse, SmartHomeFixtureMatchesModelBuiltInCode) {
  auto r = parse(testing_support::fixture_document("smarthome.ethica"));
  ASSERT_TRUE(r.ok()) << dump(r);
  ASSERT_EQ(r.bundle->models.size(), 1u);
  const auto& m = r.bundle->models[0];
  EXPECT_EQ(m.actions.size(), 2u);
  EXPECT_EQ(m.background.size(), 2u);
  EXPECT_EQ(m.consequences.size(), 5u);
  EXPECT_EQ(m.mechanisms.size(), 5u);
  EXPECT_EQ(m.utilities.size(), 2u);
  EXPECT_EQ(m.intentions.size(), 2u);
  EXPECT_EQ(m, testing_support::smarthome());
  EXPECT_EQ(r.bundle->spaces.size(), 2u);
  EXPECT_EQ(r.bundle->properties.size(), 2u);
  EXPECT_EQ(r.bundle->suites.size(), 1u);
}

TEST(Parse, AllFixturesTogether) {
  const auto r = testing_support::parse_fixtures();
  ASSERT_TRUE(r.ok()) << dump(r);
  const auto& b = *r.bundle;
  EXPECT_EQ(b.policies.size(), 1u);
  EXPECT_EQ(b.plan_sets.size(), 2u);
  EXPECT_EQ(b.annotation_sets.size(), 2u);
  EXPECT_EQ(resolve_suite(b, "case_studies").size(), 3u);
  const auto& ua = find_policy(b, "UA");
  EXPECT_EQ(ua.find("f1")->rank, 4);
  EXPECT_EQ(ua.find("f1")->description, "do not harm people");
  ASSERT_NE(ua.find(kVacuousPrinciple), nullptr);
  EXPECT_EQ(find_plan_set(b, "UA_plans_double_f4").plans[0].violations,
            (std::vector<std::string>{"f4", "f4"}));
  const auto& three = find_annotations(b, "three_way").annotations;
  EXPECT_TRUE(three.prefers(1, 1, 0));
  EXPECT_TRUE(three.prefers(2, 2, 1));
  EXPECT_EQ(three.get(0, 0, 1), Preference::incomparable);
}

TEST(Parse, CrossFileSuiteNeedsItsDependencies) {
  const auto r = parse(testing_support::fixture_document("case_studies.ethica"));
  ASSERT_FALSE(r.ok());
  for (const auto& d : r.diagnostics) {
    EXPECT_EQ(d.kind, DiagnosticKind::reference);
    EXPECT_EQ(d.origin, "case_studies.ethica");
  }
}

TEST(Parse, EmptyAndCommentOnlyDocuments) {
  EXPECT_TRUE(parse_ok("").empty());
  EXPECT_TRUE(parse_ok("  \n# nothing\n// still nothing\n").empty());
}

TEST(Parse, KeywordsAreContextual) {
  // Section words are usable as names.
  const auto b = parse_ok(
      "model model {\n"
      "  actions actions;\n"
      "  background;\n"
      "  consequences utilities, mode;\n"
      "  mechanisms utilities := actions; mode := utilities and not actions;\n"
      "  utilities mode : 2.5e1;\n"
      "  intentions actions -> utilities;\n"
      "}\n");
  ASSERT_EQ(b.models.size(), 1u);
  EXPECT_EQ(b.models[0].name, "model");
  EXPECT_EQ(b.models[0].utilities.at("mode"), 25.0);
  EXPECT_EQ(b.models[0].mode, ActionMode::power_set);
}

TEST(Parse, StringEscapes) {
  const auto b = parse_ok("policy P { principle p : 1 \"say \\\"no\\\" \\\\ twice\"; }");
  EXPECT_EQ(b.policies[0].find("p")->description, "say \"no\" \\ twice");
  EXPECT_EQ(parse_ok(serialize(b)), b);
}

TEST(Parse, PrincipleRankDefaultsAndVacuous) {
  const auto b = parse_ok("policy P { principle a; principle b : -2 }");
  const auto& p = b.policies[0];
  ASSERT_EQ(p.principles.size(), 3u);
  EXPECT_TRUE(p.find(kVacuousPrinciple)->is_vacuous);
  EXPECT_GT(p.find(kVacuousPrinciple)->rank, p.find("a")->rank);
  EXPECT_EQ(parse_ok(serialize(b)), b);
}

TEST(Parse, SpaceKinds) {
  const auto b = parse_ok(
      "space g { kind governor_annotations; tasks 2; laws 1; }\n"
      "space r { kind governor_annotations; law_order l2, l3, l1; }\n");
  EXPECT_EQ(b.spaces[0].n_tasks, 2u);
  EXPECT_EQ(b.spaces[0].n_laws, 1u);
  EXPECT_EQ(std::get<GovernorSpace>(resolve_space(b, "g").definition).n_tasks, 2u);
  EXPECT_EQ(b.spaces[1].law_order, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Parse, PropertyPrecedence) {
  const auto b = parse_ok(
      "property p { forall scenario : not cycle() and selected(t1) or selected(t2) implies "
      "selected(t3) implies true }");
  // implies is right-associative and binds loosest; not binds tightest.
  using E = PropertyExpr;
  auto sel = [](const char* t) { return E::atom({"selected", {t}}); };
  const auto expected = E::implies(
      E::disj(E::conj(E::negate(E::atom({"cycle", {}})), sel("t1")), sel("t2")),
      E::implies(sel("t3"), E::constant(true)));
  EXPECT_EQ(b.properties[0].condition, expected);
}

// --- diagnostics -----------------------------------------------------------------

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
}

TEST(Diagnostics, BadDocumentsYieldNoBundleAndPositionedErrors) {
  for (const auto& bad : bad_documents()) {
    SCOPED_TRACE(bad.label);
    const std::string& text = bad.text;
    const auto r = parse(text, "bad.ethica");
    EXPECT_FALSE(r.bundle.has_value());
    ASSERT_FALSE(r.diagnostics.empty());
    const auto& d = r.diagnostics.front();
    EXPECT_EQ(d.kind, bad.kind) << d.format();
    EXPECT_EQ(d.position.line, bad.line) << d.format();
    EXPECT_EQ(d.origin, "bad.ethica");
    EXPECT_LE(d.position.line, line_count(text));
    EXPECT_GE(d.position.column, 1u);
    EXPECT_FALSE(d.message.empty());
    EXPECT_EQ(d.format().rfind("bad.ethica:" + std::to_string(d.position.line) + ":", 0), 0u);
  }
}

TEST(Diagnostics, MisspelledBackgroundPointsAtTheWord) {
  std::string text = testing_support::read_file(testing_support::fixture_path("smarthome.ethica"));
  const std::string needle = "lights_on or daylight";
  const auto at = text.find(needle);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, needle.size(), "lights_on or dayligt");
  const auto r = parse(text, "smarthome.ethica");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const auto& d = r.diagnostics[0];
  EXPECT_EQ(d.kind, DiagnosticKind::reference);
  SourceDocument doc{text, "smarthome.ethica"};
  EXPECT_EQ(d.position, doc.position_of(at + std::string("lights_on or ").size()));
  EXPECT_NE(d.message.find("dayligt"), std::string::npos);
}

TEST(Diagnostics, SortedAcrossDocuments) {
  const std::vector<SourceDocument> docs{
      {"suite S { check s : p; }", "first.ethica"},
      {"space s { kind governor_annotations; }\nsuite T { check x : y; }", "second.ethica"}};
  const auto r = parse(docs);
  ASSERT_FALSE(r.ok());
  ASSERT_GE(r.diagnostics.size(), 3u);
  EXPECT_EQ(r.diagnostics.front().origin, "first.ethica");
  EXPECT_EQ(r.diagnostics.back().origin, "second.ethica");
  for (std::size_t i = 1; i < r.diagnostics.size(); ++i) {
    const auto& a = r.diagnostics[i - 1];
    const auto& b = r.diagnostics[i];
    if (a.origin == b.origin) {
      EXPECT_LE(a.position, b.position);
    }
  }
}

TEST(Diagnostics, DuplicatesAcrossDocuments) {
  const std::vector<SourceDocument> docs{{"policy P { principle a; }", "one"},
                                         {"\npolicy P { principle b; }", "two"}};
  const auto r = parse(docs);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].origin, "two");
  EXPECT_EQ(r.diagnostics[0].position.line, 2u);
}

// --- round trip ------------------------------------------------------------------

TEST(RoundTrip, Fixtures) {
  const auto r = testing_support::parse_fixtures();
  ASSERT_TRUE(r.ok()) << dump(r);
  const std::string once = serialize(*r.bundle);
  const auto again = parse(once);
  ASSERT_TRUE(again.ok()) << dump(again) << once;
  EXPECT_EQ(*again.bundle, *r.bundle);
  EXPECT_EQ(serialize(*again.bundle), once);
}

TEST(RoundTrip, EmptyBundleSerializesToWhitespace) {
  const std::string text = serialize(Bundle{});
  EXPECT_EQ(text.find_first_not_of(" \t\r\n"), std::string::npos);
  EXPECT_TRUE(parse_ok(text).empty());
}

TEST(RoundTrip, GeneratedBundles) {
  BundleGenerator g{std::mt19937_64(51)};
  for (int i = 0; i < 300; ++i) {
    const Bundle b = g.bundle(i);
    const std::string text = serialize(b);
    const auto r = parse(text, "generated");
    ASSERT_TRUE(r.ok()) << dump(r) << text;
    ASSERT_EQ(*r.bundle, b) << text;
    ASSERT_EQ(serialize(*r.bundle), text);
  }
}

TEST(RoundTrip, NumbersSurviveExactly) {
  for (double u : {0.1, -1e-300, 1.7976931348623157e308, 5e-324, 123456789.125, -0.0}) {
    Bundle b;
    CausalAgencyModel m = testing_support::smarthome();
    m.utilities["lights_on"] = u;
    b.models.push_back(m);
    const auto back = parse_ok(serialize(b));
    ASSERT_EQ(back.models.size(), 1u);
    EXPECT_EQ(back.models[0].utilities.at("lights_on"), u);
    EXPECT_EQ(std::signbit(back.models[0].utilities.at("lights_on")), std::signbit(u));
  }
}

}  // namespace
