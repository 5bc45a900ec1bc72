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

// Text format for models, policies, plan sets, annotation sets, scenario
// spaces, properties and suites (`.ethica` files).
//
//   bundle      := item*
//   item        := model | policy | plans | annotations | space | property | suite
//   model       := "model" NAME "{"
//                    "actions" idlist ";"
//                    "background" [NAME "=" BOOL ("," NAME "=" BOOL)*] ";"
//                    "consequences" idlist ";"
//                    "mechanisms" (NAME ":=" formula ";")*
//                    "utilities" (NAME ":" NUMBER ";")*
//                    "intentions" (NAME "->" NAME ";")*
//                    ["mode" ("exactly_one" | "power_set") ";"]
//                  "}"
//   formula     := disjunction of conjunctions of
//                  NAME | true | false | "not" formula | "(" formula ")"
//   policy      := "policy" NAME "{" ("principle" NAME [":" INT] [STRING] [";"])* "}"
//   plans       := "plans" NAME "{" "policy" NAME ";"
//                    ("plan" NAME ["violates" idlist] ";")* "}"
//   annotations := "annotations" NAME "{" "tasks" INT ";" "laws" INT ";"
//                    (LAW ":" TASK "<" TASK ";")* "}"
//   space       := "space" NAME "{" "kind" KIND ";" kind-specific fields "}"
//   property    := "property" NAME "{" ("forall" | "exists") "scenario" ":"
//                    propexpr [";"] "}"
//   propexpr    := formula over atoms NAME "(" args ")" with "implies"
//   suite       := "suite" NAME "{" ("check" NAME ":" NAME ";")* "}"
//
// Line comments start with `#` or `//`. Section keywords are contextual; the
// words true, false, not, and, or, implies are reserved.
//
// parse() either returns a fully cross-checked Bundle or positioned
// diagnostics, never both. serialize() emits text that parses back to an
// equal Bundle.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <utility>
#include <vector>

#include "ethica/causal_model.hpp"
#include "ethica/error.hpp"
#include "ethica/formula.hpp"
#include "ethica/governor.hpp"
#include "ethica/policy.hpp"
#include "ethica/property.hpp"
#include "ethica/verifier.hpp"

namespace ethica::dsl {

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(const SourcePosition&) const = default;
  auto operator<=>(const SourcePosition&) const = default;
};

struct SourceDocument {
  std::string text;
  std::string origin = "<input>";

  /// 1-based position of a byte offset (clamped to the end of the text).
  SourcePosition position_of(std::size_t offset) const {
    SourcePosition pos;
    offset = std::min(offset, text.size());
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
    return pos;
  }
};

enum class DiagnosticKind { lexical, syntax, reference, shape };

inline const char* to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::lexical: return "lexical";
    case DiagnosticKind::syntax: return "syntax";
    case DiagnosticKind::reference: return "reference";
    case DiagnosticKind::shape: return "shape";
  }
  return "unknown";
}

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::syntax;
  std::string origin;
  SourcePosition position;
  std::string message;
  std::string expected;  // hint, may be empty

  std::string format() const {
    std::string out = origin + ":" + std::to_string(position.line) + ":" +
                      std::to_string(position.column) + ": " + to_string(kind) +
                      " error: " + message;
    if (!expected.empty()) out += " (expected " + expected + ")";
    return out;
  }
};

struct PlanSet {
  std::string name;
  std::string policy;
  std::vector<PlanCandidate> plans;

  bool operator==(const PlanSet&) const = default;
};

struct AnnotationScenario {
  std::string name;
  LawAnnotationSet annotations;

  bool operator==(const AnnotationScenario&) const = default;
};

/// A scenario space as written; resolve_space() turns it into a
/// ScenarioSpace against a bundle.
struct SpaceDecl {
  std::string name;
  SpaceKind kind = SpaceKind::pde_backgrounds;
  std::string source;  // model (pde_backgrounds) or plan set (plan_availability)
  std::vector<std::string> vary;
  Assignment fixed;
  std::size_t n_tasks = 3;
  std::size_t n_laws = kAsimovLaws;
  std::vector<std::size_t> law_order;

  bool operator==(const SpaceDecl&) const = default;
};

struct SuiteCheck {
  std::string space;
  std::string property;

  bool operator==(const SuiteCheck&) const = default;
};

struct Suite {
  std::string name;
  std::vector<SuiteCheck> checks;

  bool operator==(const Suite&) const = default;
};

/// Everything declared in one or more documents, in declaration order.
struct Bundle {
  std::vector<CausalAgencyModel> models;
  std::vector<EthicalPolicy> policies;
  std::vector<PlanSet> plan_sets;
  std::vector<AnnotationScenario> annotation_sets;
  std::vector<SpaceDecl> spaces;
  std::vector<PropertySpec> properties;
  std::vector<Suite> suites;

  bool operator==(const Bundle&) const = default;

  bool empty() const {
    return models.empty() && policies.empty() && plan_sets.empty() &&
           annotation_sets.empty() && spaces.empty() && properties.empty() &&
           suites.empty();
  }
};

namespace detail {

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  for (const auto& item : items)
    if (item.name == name) return &item;
  return nullptr;
}

}  // namespace detail

template <typename T>
const T& require_named(const std::vector<T>& items, std::string_view name,
                       std::string_view what) {
  if (const T* item = detail::find_named(items, name)) return *item;
  throw Error(ErrorKind::unknown_name,
              "no " + std::string(what) + " named '" + std::string(name) + "'");
}

inline const CausalAgencyModel& find_model(const Bundle& b, std::string_view name) {
  return require_named(b.models, name, "model");
}
inline const EthicalPolicy& find_policy(const Bundle& b, std::string_view name) {
  return require_named(b.policies, name, "policy");
}
inline const PlanSet& find_plan_set(const Bundle& b, std::string_view name) {
  return require_named(b.plan_sets, name, "plan set");
}
inline const AnnotationScenario& find_annotations(const Bundle& b,
                                                  std::string_view name) {
  return require_named(b.annotation_sets, name, "annotation set");
}
inline const PropertySpec& find_property(const Bundle& b, std::string_view name) {
  return require_named(b.properties, name, "property");
}
inline const Suite& find_suite(const Bundle& b, std::string_view name) {
  return require_named(b.suites, name, "suite");
}

inline ScenarioSpace resolve_space(const Bundle& b, const SpaceDecl& decl) {
  ScenarioSpace space{decl.name, {}};
  switch (decl.kind) {
    case SpaceKind::pde_backgrounds:
      space.definition = PdeBackgroundSpace{find_model(b, decl.source), decl.vary, decl.fixed};
      break;
    case SpaceKind::governor_annotations:
      space.definition = GovernorSpace{decl.n_tasks, decl.n_laws, decl.law_order};
      break;
    case SpaceKind::plan_availability: {
      const PlanSet& plans = find_plan_set(b, decl.source);
      space.definition = AvailabilitySpace{find_policy(b, plans.policy), plans.plans};
      break;
    }
  }
  return space;
}

inline ScenarioSpace resolve_space(const Bundle& b, std::string_view name) {
  return resolve_space(b, require_named(b.spaces, name, "space"));
}

inline std::vector<SuiteEntry> resolve_suite(const Bundle& b, std::string_view name) {
  std::vector<SuiteEntry> out;
  for (const auto& check : find_suite(b, name).checks)
    out.push_back({resolve_space(b, check.space), find_property(b, check.property)});
  return out;
}

// ---------------------------------------------------------------------------
// Lexing and parsing.

namespace detail {

struct Token {
  enum class Type { identifier, number, string, punct, end };
  Type type = Type::end;
  std::string text;
  SourcePosition pos;
};

inline bool is_reserved(std::string_view word) {
  return word == "true" || word == "false" || word == "not" || word == "and" ||
         word == "or" || word == "implies";
}

struct Failure {
  Diagnostic diagnostic;
};

class Lexer {
 public:
  explicit Lexer(const SourceDocument& doc) : doc_(doc) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    const std::string& s = doc_.text;
    while (true) {
      skip_space_and_comments();
      if (i_ >= s.size()) break;
      const SourcePosition pos{line_, column_};
      const char c = s[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i_;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
          ++j;
        tokens.push_back({Token::Type::identifier, s.substr(i_, j - i_), pos});
        advance(j - i_);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && i_ + 1 < s.size() &&
                  std::isdigit(static_cast<unsigned char>(s[i_ + 1])))) {
        tokens.push_back({Token::Type::number, lex_number(pos), pos});
      } else if (c == '"') {
        tokens.push_back({Token::Type::string, lex_string(pos), pos});
      } else if (s.compare(i_, 2, ":=") == 0 || s.compare(i_, 2, "->") == 0) {
        tokens.push_back({Token::Type::punct, s.substr(i_, 2), pos});
        advance(2);
      } else if (std::string_view("{}();:,=<").find(c) != std::string_view::npos) {
        tokens.push_back({Token::Type::punct, std::string(1, c), pos});
        advance(1);
      } else {
        fail(pos, std::string("unexpected character '") + c + "'");
      }
    }
    tokens.push_back({Token::Type::end, "", {line_, column_}});
    return tokens;
  }

 private:
  [[noreturn]] void fail(SourcePosition pos, std::string message,
                         std::string expected = {}) const {
    throw Failure{{DiagnosticKind::lexical, doc_.origin, pos, std::move(message),
                   std::move(expected)}};
  }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < doc_.text.size(); ++k, ++i_) {
      if (doc_.text[i_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void skip_space_and_comments() {
    const std::string& s = doc_.text;
    while (i_ < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i_]))) {
        advance(1);
      } else if (s[i_] == '#' || s.compare(i_, 2, "//") == 0) {
        while (i_ < s.size() && s[i_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  std::string lex_number(SourcePosition pos) {
    const std::string& s = doc_.text;
    std::size_t j = i_;
    const auto digits = [&] {
      const std::size_t start = j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      return j > start;
    };
    if (s[j] == '-') ++j;
    digits();
    if (j < s.size() && s[j] == '.') {
      ++j;
      if (!digits()) fail(pos, "malformed number", "digits after '.'");
    }
    if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
      ++j;
      if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
      if (!digits()) fail(pos, "malformed number", "exponent digits");
    }
    if (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      fail(pos, "malformed number", "a separator after the number");
    std::string text = s.substr(i_, j - i_);
    advance(j - i_);
    return text;
  }

  std::string lex_string(SourcePosition pos) {
    const std::string& s = doc_.text;
    std::string out;
    advance(1);
    while (true) {
      if (i_ >= s.size() || s[i_] == '\n') fail(pos, "unterminated string", "'\"'");
      const char c = s[i_];
      if (c == '"') {
        advance(1);
        return out;
      }
      if (c == '\\') {
        if (i_ + 1 >= s.size()) fail(pos, "unterminated string", "'\"'");
        const char e = s[i_ + 1];
        if (e != '"' && e != '\\')
          fail({line_, column_}, "unknown escape sequence", "\\\" or \\\\");
        out += e;
        advance(2);
        continue;
      }
      out += c;
      advance(1);
    }
  }

  const SourceDocument& doc_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct Located {
  std::string name;
  SourcePosition pos;
};

// Positions retained from syntax analysis for cross-checking.
struct ModelSource {
  SourcePosition pos;
  std::vector<Located> declarations;  // A, B, C in order
  std::vector<Located> mechanisms;    // consequents
  std::vector<std::pair<std::string, Located>> formula_refs;  // (consequent, ref)
  std::vector<Located> utilities;
  std::vector<std::pair<Located, Located>> intentions;
};

struct PolicySource {
  SourcePosition pos;
  std::vector<Located> principles;
};

struct PlanSetSource {
  SourcePosition pos;
  Located policy;
  std::vector<Located> plans;
  std::vector<Located> violations;
};

struct SpaceSource {
  SourcePosition pos;
  SourcePosition governor_pos;  // first governor field, if any
  Located source;
  std::vector<Located> vary;
  std::vector<Located> fixed;
};

struct PropertySource {
  SourcePosition pos;
};

struct SuiteSource {
  SourcePosition pos;
  std::vector<std::pair<Located, Located>> checks;
};

struct SourceMap {
  std::string origin;
  std::vector<ModelSource> models;
  std::vector<PolicySource> policies;
  std::vector<PlanSetSource> plan_sets;
  std::vector<SourcePosition> annotation_sets;
  std::vector<SpaceSource> spaces;
  std::vector<PropertySource> properties;
  std::vector<SuiteSource> suites;
};

class Parser {
 public:
  Parser(const SourceDocument& doc, std::vector<Token> tokens)
      : doc_(doc), tokens_(std::move(tokens)) {
    map_.origin = doc.origin;
  }

  void run(Bundle& bundle) {
    while (peek().type != Token::Type::end) {
      const Token& head = peek();
      if (head.type != Token::Type::identifier)
        syntax_error(head, "unexpected " + describe(head), item_keywords());
      const std::string kw = head.text;
      if (kw == "model") bundle.models.push_back(parse_model());
      else if (kw == "policy") bundle.policies.push_back(parse_policy());
      else if (kw == "plans") bundle.plan_sets.push_back(parse_plans());
      else if (kw == "annotations") bundle.annotation_sets.push_back(parse_annotations());
      else if (kw == "space") bundle.spaces.push_back(parse_space());
      else if (kw == "property") bundle.properties.push_back(parse_property());
      else if (kw == "suite") bundle.suites.push_back(parse_suite());
      else syntax_error(head, "unknown item '" + kw + "'", item_keywords());
    }
  }

  SourceMap& source_map() { return map_; }

 private:
  static std::string item_keywords() {
    return "model, policy, plans, annotations, space, property or suite";
  }

  static std::string describe(const Token& t) {
    switch (t.type) {
      case Token::Type::end: return "end of input";
      case Token::Type::identifier: return "'" + t.text + "'";
      case Token::Type::number: return "number " + t.text;
      case Token::Type::string: return "string";
      case Token::Type::punct: return "'" + t.text + "'";
    }
    return "token";
  }

  [[noreturn]] void syntax_error(const Token& at, std::string message,
                                 std::string expected = {}) const {
    throw Failure{{DiagnosticKind::syntax, doc_.origin, at.pos, std::move(message),
                   std::move(expected)}};
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool at_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::punct && t.text == p;
  }
  bool at_word(std::string_view w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::identifier && t.text == w;
  }

  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p))
      syntax_error(peek(), "unexpected " + describe(peek()), "'" + std::string(p) + "'");
    next();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w))
      syntax_error(peek(), "unexpected " + describe(peek()), "'" + std::string(w) + "'");
    next();
  }

  Located expect_name(std::string_view what) {
    const Token& t = peek();
    if (t.type != Token::Type::identifier)
      syntax_error(t, "unexpected " + describe(t), std::string(what));
    if (is_reserved(t.text))
      syntax_error(t, "'" + t.text + "' is reserved", std::string(what));
    next();
    return {t.text, t.pos};
  }

  long expect_integer(std::string_view what) {
    const Token& t = peek();
    long value = 0;
    if (t.type == Token::Type::number) {
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec == std::errc() && p == t.text.data() + t.text.size()) {
        next();
        return value;
      }
    }
    syntax_error(t, "unexpected " + describe(t), std::string(what));
  }

  double expect_number() {
    const Token& t = peek();
    if (t.type != Token::Type::number)
      syntax_error(t, "unexpected " + describe(t), "a number");
    double value = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || !std::isfinite(value))
      syntax_error(t, "number " + t.text + " is out of range", "a finite number");
    next();
    return value;
  }

  bool expect_bool() {
    if (at_word("true")) {
      next();
      return true;
    }
    if (at_word("false")) {
      next();
      return false;
    }
    syntax_error(peek(), "unexpected " + describe(peek()), "true or false");
  }

  // NAME ("," NAME)* up to (not including) `;`; may be empty.
  std::vector<Located> name_list(std::string_view what) {
    std::vector<Located> out;
    if (at_punct(";")) return out;
    out.push_back(expect_name(what));
    while (accept_punct(",")) out.push_back(expect_name(what));
    return out;
  }

  static std::vector<std::string> names(const std::vector<Located>& ls) {
    std::vector<std::string> out;
    for (const auto& l : ls) out.push_back(l.name);
    return out;
  }

  // --- formulas -------------------------------------------------------------

  Formula formula(ModelSource& src, const std::string& consequent) {
    Formula lhs = conjunction(src, consequent);
    while (at_word("or")) {
      next();
      lhs = Formula::disj(std::move(lhs), conjunction(src, consequent));
    }
    return lhs;
  }

  Formula conjunction(ModelSource& src, const std::string& consequent) {
    Formula lhs = literal(src, consequent);
    while (at_word("and")) {
      next();
      lhs = Formula::conj(std::move(lhs), literal(src, consequent));
    }
    return lhs;
  }

  Formula literal(ModelSource& src, const std::string& consequent) {
    if (at_word("not")) {
      next();
      return Formula::negate(literal(src, consequent));
    }
    if (accept_punct("(")) {
      Formula inner = formula(src, consequent);
      expect_punct(")");
      return inner;
    }
    if (at_word("true") || at_word("false")) return Formula::constant(expect_bool());
    const Token& t = peek();
    if (t.type != Token::Type::identifier)
      syntax_error(t, "unexpected " + describe(t), "a variable, true, false, not or '('");
    Located ref = expect_name("a variable");
    src.formula_refs.push_back({consequent, ref});
    return Formula::var(ref.name);
  }

  // --- items ----------------------------------------------------------------

  CausalAgencyModel parse_model() {
    ModelSource src;
    src.pos = peek().pos;
    next();
    CausalAgencyModel m;
    m.name = expect_name("a model name").name;
    expect_punct("{");

    expect_word("actions");
    auto actions = name_list("an action name");
    expect_punct(";");
    m.actions = names(actions);

    expect_word("background");
    std::vector<Located> background;
    if (!at_punct(";")) {
      do {
        background.push_back(expect_name("a background variable"));
        expect_punct("=");
        m.background_defaults[background.back().name] = expect_bool();
      } while (accept_punct(","));
    }
    expect_punct(";");
    m.background = names(background);

    expect_word("consequences");
    auto consequences = name_list("a consequence name");
    expect_punct(";");
    m.consequences = names(consequences);

    for (auto* group : {&actions, &background, &consequences})
      src.declarations.insert(src.declarations.end(), group->begin(), group->end());

    expect_word("mechanisms");
    while (peek().type == Token::Type::identifier && at_punct(":=", 1)) {
      Located consequent = expect_name("a consequence name");
      expect_punct(":=");
      Formula antecedent = formula(src, consequent.name);
      expect_punct(";");
      src.mechanisms.push_back(consequent);
      m.mechanisms.push_back({consequent.name, std::move(antecedent)});
    }

    expect_word("utilities");
    while (peek().type == Token::Type::identifier && at_punct(":", 1)) {
      Located var = expect_name("a variable");
      expect_punct(":");
      const Token& num = peek();
      const double u = expect_number();
      expect_punct(";");
      if (!m.utilities.emplace(var.name, u).second)
        syntax_error(num, "utility of '" + var.name + "' given twice");
      src.utilities.push_back(var);
    }

    expect_word("intentions");
    while (peek().type == Token::Type::identifier && at_punct("->", 1)) {
      Located action = expect_name("an action name");
      expect_punct("->");
      Located consequence = expect_name("a consequence name");
      expect_punct(";");
      m.intentions.push_back({action.name, consequence.name});
      src.intentions.push_back({action, consequence});
    }

    if (at_word("mode")) {
      next();
      if (at_word("exactly_one")) m.mode = ActionMode::exactly_one;
      else if (at_word("power_set")) m.mode = ActionMode::power_set;
      else syntax_error(peek(), "unexpected " + describe(peek()), "exactly_one or power_set");
      next();
      expect_punct(";");
    }
    expect_punct("}");
    map_.models.push_back(std::move(src));
    return m;
  }

  EthicalPolicy parse_policy() {
    PolicySource src;
    src.pos = peek().pos;
    next();
    std::string name = expect_name("a policy name").name;
    expect_punct("{");
    std::vector<Principle> principles;
    while (at_word("principle")) {
      next();
      Located id = expect_name("a principle name");
      Principle p{id.name, {}, false, 0};
      if (accept_punct(":")) p.rank = expect_integer("an integer rank");
      if (peek().type == Token::Type::string) p.description = next().text;
      accept_punct(";");
      src.principles.push_back(id);
      principles.push_back(std::move(p));
    }
    expect_punct("}");
    map_.policies.push_back(std::move(src));
    return EthicalPolicy::with_vacuous_top(std::move(name), std::move(principles));
  }

  PlanSet parse_plans() {
    PlanSetSource src;
    src.pos = peek().pos;
    next();
    PlanSet set;
    set.name = expect_name("a plan set name").name;
    expect_punct("{");
    expect_word("policy");
    src.policy = expect_name("a policy name");
    set.policy = src.policy.name;
    expect_punct(";");
    while (at_word("plan")) {
      next();
      Located id = expect_name("a plan name");
      PlanCandidate plan{id.name, {}};
      if (at_word("violates")) {
        next();
        auto vs = name_list("a principle name");
        plan.violations = names(vs);
        src.violations.insert(src.violations.end(), vs.begin(), vs.end());
      }
      expect_punct(";");
      src.plans.push_back(id);
      set.plans.push_back(std::move(plan));
    }
    expect_punct("}");
    map_.plan_sets.push_back(std::move(src));
    return set;
  }

  std::size_t indexed(char prefix, std::size_t count, std::string_view what) {
    const Token& t = peek();
    if (t.type == Token::Type::identifier) {
      if (auto i = ethica::detail::parse_indexed(t.text, prefix, count)) {
        next();
        return *i;
      }
    }
    syntax_error(t, "unexpected " + describe(t),
                 std::string(what) + " " + prefix + "1.." + prefix + std::to_string(count));
  }

  std::size_t positive_count(std::string_view what) {
    const Token& t = peek();
    const long v = expect_integer(what);
    if (v < 1 || v > 64) syntax_error(t, "count " + t.text + " out of range", "1..64");
    return static_cast<std::size_t>(v);
  }

  AnnotationScenario parse_annotations() {
    map_.annotation_sets.push_back(peek().pos);
    next();
    AnnotationScenario out;
    out.name = expect_name("an annotation set name").name;
    expect_punct("{");
    expect_word("tasks");
    const std::size_t n_tasks = positive_count("a task count");
    expect_punct(";");
    expect_word("laws");
    const std::size_t n_laws = positive_count("a law count");
    expect_punct(";");
    out.annotations = LawAnnotationSet(n_tasks, n_laws);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    while (!at_punct("}")) {
      const std::size_t law = indexed('l', n_laws, "a law");
      expect_punct(":");
      const Token& at = peek();
      const std::size_t better = indexed('t', n_tasks, "a task");
      expect_punct("<");
      const std::size_t worse = indexed('t', n_tasks, "a task");
      expect_punct(";");
      if (better == worse) syntax_error(at, "a task cannot be preferred over itself");
      if (!seen.insert({law, std::min(better, worse), std::max(better, worse)}).second)
        syntax_error(at, "pair annotated twice for the same law");
      out.annotations.set(law, better, worse, Preference::first_preferred);
    }
    expect_punct("}");
    return out;
  }

  SpaceDecl parse_space() {
    SpaceSource src;
    src.pos = peek().pos;
    next();
    SpaceDecl d;
    d.name = expect_name("a space name").name;
    expect_punct("{");
    expect_word("kind");
    if (at_word("pde_backgrounds")) d.kind = SpaceKind::pde_backgrounds;
    else if (at_word("governor_annotations")) d.kind = SpaceKind::governor_annotations;
    else if (at_word("plan_availability")) d.kind = SpaceKind::plan_availability;
    else
      syntax_error(peek(), "unexpected " + describe(peek()),
                   "pde_backgrounds, governor_annotations or plan_availability");
    next();
    expect_punct(";");
    switch (d.kind) {
      case SpaceKind::pde_backgrounds:
        expect_word("model");
        src.source = expect_name("a model name");
        expect_punct(";");
        if (at_word("vary")) {
          next();
          src.vary = name_list("a background variable");
          d.vary = names(src.vary);
          expect_punct(";");
        }
        if (at_word("fix")) {
          next();
          if (!at_punct(";")) {
            do {
              src.fixed.push_back(expect_name("a background variable"));
              expect_punct("=");
              d.fixed[src.fixed.back().name] = expect_bool();
            } while (accept_punct(","));
          }
          expect_punct(";");
        }
        break;
      case SpaceKind::governor_annotations:
        src.governor_pos = peek().pos;
        if (at_word("tasks")) {
          next();
          d.n_tasks = positive_count("a task count");
          expect_punct(";");
        }
        if (at_word("laws")) {
          next();
          d.n_laws = positive_count("a law count");
          expect_punct(";");
        }
        if (at_word("law_order")) {
          src.governor_pos = peek().pos;
          next();
          d.law_order.push_back(indexed('l', d.n_laws, "a law"));
          while (accept_punct(",")) d.law_order.push_back(indexed('l', d.n_laws, "a law"));
          expect_punct(";");
        }
        break;
      case SpaceKind::plan_availability:
        expect_word("plans");
        src.source = expect_name("a plan set name");
        expect_punct(";");
        break;
    }
    d.source = src.source.name;
    expect_punct("}");
    map_.spaces.push_back(std::move(src));
    return d;
  }

  // --- property expressions -------------------------------------------------

  PropertyExpr prop_implication() {
    PropertyExpr lhs = prop_disjunction();
    if (at_word("implies")) {
      next();
      return PropertyExpr::implies(std::move(lhs), prop_implication());
    }
    return lhs;
  }

  PropertyExpr prop_disjunction() {
    PropertyExpr lhs = prop_conjunction();
    while (at_word("or")) {
      next();
      lhs = PropertyExpr::disj(std::move(lhs), prop_conjunction());
    }
    return lhs;
  }

  PropertyExpr prop_conjunction() {
    PropertyExpr lhs = prop_literal();
    while (at_word("and")) {
      next();
      lhs = PropertyExpr::conj(std::move(lhs), prop_literal());
    }
    return lhs;
  }

  PropertyExpr prop_literal() {
    if (at_word("not")) {
      next();
      return PropertyExpr::negate(prop_literal());
    }
    if (accept_punct("(")) {
      PropertyExpr inner = prop_implication();
      expect_punct(")");
      return inner;
    }
    if (at_word("true") || at_word("false")) return PropertyExpr::constant(expect_bool());
    const Token& t = peek();
    if (t.type != Token::Type::identifier)
      syntax_error(t, "unexpected " + describe(t), "an atom, true, false, not or '('");
    Atom atom{expect_name("an atom").name, {}};
    expect_punct("(");
    if (!at_punct(")")) {
      atom.args.push_back(expect_name("an atom argument").name);
      while (accept_punct(",")) atom.args.push_back(expect_name("an atom argument").name);
    }
    expect_punct(")");
    return PropertyExpr::atom(std::move(atom));
  }

  PropertySpec parse_property() {
    map_.properties.push_back({peek().pos});
    next();
    PropertySpec p;
    p.name = expect_name("a property name").name;
    expect_punct("{");
    if (at_word("forall")) p.quantifier = Quantifier::forall;
    else if (at_word("exists")) p.quantifier = Quantifier::exists;
    else syntax_error(peek(), "unexpected " + describe(peek()), "forall or exists");
    next();
    expect_word("scenario");
    expect_punct(":");
    p.condition = prop_implication();
    accept_punct(";");
    expect_punct("}");
    return p;
  }

  Suite parse_suite() {
    SuiteSource src;
    src.pos = peek().pos;
    next();
    Suite s;
    s.name = expect_name("a suite name").name;
    expect_punct("{");
    while (at_word("check")) {
      next();
      Located space = expect_name("a space name");
      expect_punct(":");
      Located property = expect_name("a property name");
      expect_punct(";");
      s.checks.push_back({space.name, property.name});
      src.checks.push_back({space, property});
    }
    expect_punct("}");
    map_.suites.push_back(std::move(src));
    return s;
  }

  const SourceDocument& doc_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  SourceMap map_;
};

// Cross-checks a merged bundle against the positions of every document.
class Checker {
 public:
  Checker(const Bundle& bundle, const std::vector<SourceMap>& maps,
          const std::vector<std::size_t>& model_doc,
          const std::vector<std::size_t>& policy_doc,
          const std::vector<std::size_t>& plan_doc,
          const std::vector<std::size_t>& annotation_doc,
          const std::vector<std::size_t>& space_doc,
          const std::vector<std::size_t>& property_doc,
          const std::vector<std::size_t>& suite_doc)
      : b_(bundle),
        maps_(maps),
        model_doc_(model_doc),
        policy_doc_(policy_doc),
        plan_doc_(plan_doc),
        annotation_doc_(annotation_doc),
        space_doc_(space_doc),
        property_doc_(property_doc),
        suite_doc_(suite_doc) {}

  std::vector<Diagnostic> run() {
    unique_names();
    for (std::size_t i = 0; i < b_.models.size(); ++i) check_model(i);
    for (std::size_t i = 0; i < b_.policies.size(); ++i) check_policy(i);
    for (std::size_t i = 0; i < b_.plan_sets.size(); ++i) check_plans(i);
    for (std::size_t i = 0; i < b_.spaces.size(); ++i) check_space(i);
    for (std::size_t i = 0; i < b_.suites.size(); ++i) check_suite(i);
    return std::move(out_);
  }

 private:
  void emit(DiagnosticKind kind, std::size_t doc, SourcePosition pos, std::string msg,
            std::string expected = {}) {
    out_.push_back({kind, maps_[doc].origin, pos, std::move(msg), std::move(expected)});
  }

  // Per-kind local index -> (document, local index within that document).
  static std::pair<std::size_t, std::size_t> locate(const std::vector<std::size_t>& docs,
                                                    std::size_t i) {
    std::size_t local = 0;
    for (std::size_t k = 0; k < i; ++k)
      if (docs[k] == docs[i]) ++local;
    return {docs[i], local};
  }

  template <typename T, typename PosOf>
  void unique_kind(const std::vector<T>& items, const std::vector<std::size_t>& docs,
                   const char* what, PosOf pos_of) {
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (seen.insert(items[i].name).second) continue;
      auto [doc, local] = locate(docs, i);
      emit(DiagnosticKind::reference, doc, pos_of(maps_[doc], local),
           std::string(what) + " '" + items[i].name + "' is declared more than once");
    }
  }

  void unique_names() {
    unique_kind(b_.models, model_doc_, "model",
                [](const SourceMap& m, std::size_t i) { return m.models[i].pos; });
    unique_kind(b_.policies, policy_doc_, "policy",
                [](const SourceMap& m, std::size_t i) { return m.policies[i].pos; });
    unique_kind(b_.plan_sets, plan_doc_, "plan set",
                [](const SourceMap& m, std::size_t i) { return m.plan_sets[i].pos; });
    unique_kind(b_.annotation_sets, annotation_doc_, "annotation set",
                [](const SourceMap& m, std::size_t i) { return m.annotation_sets[i]; });
    unique_kind(b_.spaces, space_doc_, "space",
                [](const SourceMap& m, std::size_t i) { return m.spaces[i].pos; });
    unique_kind(b_.properties, property_doc_, "property",
                [](const SourceMap& m, std::size_t i) { return m.properties[i].pos; });
    unique_kind(b_.suites, suite_doc_, "suite",
                [](const SourceMap& m, std::size_t i) { return m.suites[i].pos; });
  }

  void check_model(std::size_t i) {
    const auto& m = b_.models[i];
    auto [doc, local] = locate(model_doc_, i);
    const ModelSource& src = maps_[doc].models[local];

    std::set<std::string, std::less<>> reported;
    for (const auto& d : src.declarations) {
      if (std::count_if(src.declarations.begin(), src.declarations.end(),
                        [&d](const Located& o) { return o.name == d.name; }) > 1 &&
          !reported.insert(d.name).second)
        emit(DiagnosticKind::shape, doc, d.pos,
             "variable '" + d.name + "' is declared more than once in model '" +
                 m.name + "'");
    }
    for (const auto& [consequent, ref] : src.formula_refs)
      if (!m.kind_of(ref.name))
        emit(DiagnosticKind::reference, doc, ref.pos,
             "mechanism for '" + consequent + "' references undeclared variable '" +
                 ref.name + "'",
             "a variable declared in model '" + m.name + "'");
    for (const auto& mech : src.mechanisms) {
      if (m.kind_of(mech.name) != VariableKind::consequence)
        emit(m.kind_of(mech.name) ? DiagnosticKind::shape : DiagnosticKind::reference, doc,
             mech.pos, "mechanism defines '" + mech.name + "', which is not a consequence",
             "a declared consequence");
    }
    for (const auto& u : src.utilities)
      if (!m.kind_of(u.name))
        emit(DiagnosticKind::reference, doc, u.pos,
             "utility given for undeclared variable '" + u.name + "'");
    for (const auto& [a, c] : src.intentions) {
      if (!m.kind_of(a.name))
        emit(DiagnosticKind::reference, doc, a.pos,
             "intention names undeclared action '" + a.name + "'");
      else if (m.kind_of(a.name) != VariableKind::action)
        emit(DiagnosticKind::shape, doc, a.pos, "'" + a.name + "' is not an action");
      if (!m.kind_of(c.name))
        emit(DiagnosticKind::reference, doc, c.pos,
             "intention names undeclared consequence '" + c.name + "'");
      else if (m.kind_of(c.name) != VariableKind::consequence)
        emit(DiagnosticKind::shape, doc, c.pos, "'" + c.name + "' is not a consequence");
    }

    // Remaining structural rules come from the model validator.
    for (const auto& v : validate_model(m).violations) {
      if (v.code != ViolationCode::duplicate_mechanism &&
          v.code != ViolationCode::missing_mechanism &&
          v.code != ViolationCode::mechanism_cycle)
        continue;
      SourcePosition pos = src.pos;
      const std::string& subject = v.subjects.front();
      const auto& pool =
          v.code == ViolationCode::missing_mechanism ? src.declarations : src.mechanisms;
      auto it = std::find_if(pool.begin(), pool.end(),
                             [&subject](const Located& l) { return l.name == subject; });
      if (v.code == ViolationCode::duplicate_mechanism)
        it = std::find_if(std::next(it), pool.end(),
                          [&subject](const Located& l) { return l.name == subject; });
      if (it != pool.end()) pos = it->pos;
      emit(DiagnosticKind::shape, doc, pos, v.message + " in model '" + m.name + "'");
    }
  }

  void check_policy(std::size_t i) {
    const auto& p = b_.policies[i];
    auto [doc, local] = locate(policy_doc_, i);
    const PolicySource& src = maps_[doc].policies[local];
    std::set<std::string, std::less<>> seen;
    for (const auto& pr : src.principles) {
      if (pr.name == kVacuousPrinciple)
        emit(DiagnosticKind::shape, doc, pr.pos,
             "'" + pr.name + "' names the implicit vacuous principle");
      else if (!seen.insert(pr.name).second)
        emit(DiagnosticKind::shape, doc, pr.pos,
             "principle '" + pr.name + "' declared twice in policy '" + p.name + "'");
    }
  }

  void check_plans(std::size_t i) {
    const auto& set = b_.plan_sets[i];
    auto [doc, local] = locate(plan_doc_, i);
    const PlanSetSource& src = maps_[doc].plan_sets[local];
    const EthicalPolicy* policy = detail::find_named(b_.policies, set.policy);
    if (policy == nullptr)
      emit(DiagnosticKind::reference, doc, src.policy.pos,
           "plan set '" + set.name + "' refers to unknown policy '" + set.policy + "'",
           "a declared policy");
    if (src.plans.empty())
      emit(DiagnosticKind::shape, doc, src.pos, "plan set '" + set.name + "' has no plans");
    std::set<std::string, std::less<>> seen;
    for (const auto& p : src.plans)
      if (!seen.insert(p.name).second)
        emit(DiagnosticKind::shape, doc, p.pos, "plan '" + p.name + "' declared twice");
    if (policy == nullptr) return;
    for (const auto& v : src.violations) {
      const Principle* pr = policy->find(v.name);
      if (pr == nullptr || pr->is_vacuous)
        emit(DiagnosticKind::reference, doc, v.pos,
             "unknown principle '" + v.name + "' in policy '" + policy->name + "'",
             "a principle of policy '" + policy->name + "'");
    }
  }

  void check_space(std::size_t i) {
    const auto& d = b_.spaces[i];
    auto [doc, local] = locate(space_doc_, i);
    const SpaceSource& src = maps_[doc].spaces[local];
    if (d.kind == SpaceKind::pde_backgrounds) {
      const CausalAgencyModel* m = detail::find_named(b_.models, d.source);
      if (m == nullptr) {
        emit(DiagnosticKind::reference, doc, src.source.pos,
             "space '" + d.name + "' refers to unknown model '" + d.source + "'",
             "a declared model");
        return;
      }
      std::set<std::string, std::less<>> seen;
      for (const auto& v : src.vary) {
        if (m->kind_of(v.name) != VariableKind::background)
          emit(DiagnosticKind::reference, doc, v.pos,
               "'" + v.name + "' is not a background variable of model '" + m->name + "'");
        else if (!seen.insert(v.name).second)
          emit(DiagnosticKind::shape, doc, v.pos, "'" + v.name + "' varied twice");
      }
      for (const auto& f : src.fixed) {
        if (m->kind_of(f.name) != VariableKind::background)
          emit(DiagnosticKind::reference, doc, f.pos,
               "'" + f.name + "' is not a background variable of model '" + m->name + "'");
        else if (seen.count(f.name) != 0)
          emit(DiagnosticKind::shape, doc, f.pos, "'" + f.name + "' is both varied and fixed");
      }
      if (d.vary.size() > kMaxVariedBackground)
        emit(DiagnosticKind::shape, doc, src.pos, "too many varied background variables");
    } else if (d.kind == SpaceKind::plan_availability) {
      if (!detail::find_named(b_.plan_sets, d.source))
        emit(DiagnosticKind::reference, doc, src.source.pos,
             "space '" + d.name + "' refers to unknown plan set '" + d.source + "'",
             "a declared plan set");
    } else {
      ScenarioSpace probe{d.name, GovernorSpace{d.n_tasks, d.n_laws, d.law_order}};
      for (const auto& p : space_problems(probe))
        emit(DiagnosticKind::shape, doc, src.governor_pos, p);
    }
  }

  void check_suite(std::size_t i) {
    const auto& s = b_.suites[i];
    auto [doc, local] = locate(suite_doc_, i);
    const SuiteSource& src = maps_[doc].suites[local];
    for (const auto& [space_ref, property_ref] : src.checks) {
      const SpaceDecl* space = detail::find_named(b_.spaces, space_ref.name);
      const PropertySpec* property = detail::find_named(b_.properties, property_ref.name);
      if (space == nullptr)
        emit(DiagnosticKind::reference, doc, space_ref.pos,
             "suite '" + s.name + "' refers to unknown space '" + space_ref.name + "'",
             "a declared space");
      if (property == nullptr)
        emit(DiagnosticKind::reference, doc, property_ref.pos,
             "suite '" + s.name + "' refers to unknown property '" + property_ref.name + "'",
             "a declared property");
      if (space == nullptr || property == nullptr) continue;
      // Atom checks need a resolvable space; earlier diagnostics cover the rest.
      ScenarioSpace resolved;
      try {
        resolved = resolve_space(b_, *space);
      } catch (const Error&) {
        continue;
      }
      for (const auto& problem : unresolved_atoms(resolved, *property))
        emit(DiagnosticKind::reference, doc, property_ref.pos,
             "property '" + property->name + "': " + problem);
    }
  }

  const Bundle& b_;
  const std::vector<SourceMap>& maps_;
  const std::vector<std::size_t>& model_doc_;
  const std::vector<std::size_t>& policy_doc_;
  const std::vector<std::size_t>& plan_doc_;
  const std::vector<std::size_t>& annotation_doc_;
  const std::vector<std::size_t>& space_doc_;
  const std::vector<std::size_t>& property_doc_;
  const std::vector<std::size_t>& suite_doc_;
  std::vector<Diagnostic> out_;
};

template <typename T>
void append(std::vector<T>& into, std::vector<T>& from, std::vector<std::size_t>& docs,
            std::size_t doc) {
  for (auto& item : from) {
    into.push_back(std::move(item));
    docs.push_back(doc);
  }
}

}  // namespace detail

struct ParseResult {
  std::optional<Bundle> bundle;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return bundle.has_value(); }
};

/// Parses several documents into one bundle; names are shared across them.
inline ParseResult parse(std::span<const SourceDocument> documents) {
  ParseResult result;
  Bundle merged;
  std::vector<detail::SourceMap> maps;
  std::vector<std::size_t> model_doc, policy_doc, plan_doc, annotation_doc, space_doc,
      property_doc, suite_doc;

  for (std::size_t d = 0; d < documents.size(); ++d) {
    const SourceDocument& doc = documents[d];
    try {
      detail::Lexer lexer(doc);
      detail::Parser parser(doc, lexer.run());
      Bundle part;
      parser.run(part);
      maps.push_back(std::move(parser.source_map()));
      detail::append(merged.models, part.models, model_doc, d);
      detail::append(merged.policies, part.policies, policy_doc, d);
      detail::append(merged.plan_sets, part.plan_sets, plan_doc, d);
      detail::append(merged.annotation_sets, part.annotation_sets, annotation_doc, d);
      detail::append(merged.spaces, part.spaces, space_doc, d);
      detail::append(merged.properties, part.properties, property_doc, d);
      detail::append(merged.suites, part.suites, suite_doc, d);
    } catch (const detail::Failure& f) {
      result.diagnostics.push_back(f.diagnostic);
      maps.push_back({doc.origin, {}, {}, {}, {}, {}, {}, {}});
    }
  }
  if (!result.diagnostics.empty()) return result;

  result.diagnostics = detail::Checker(merged, maps, model_doc, policy_doc, plan_doc,
                                       annotation_doc, space_doc, property_doc, suite_doc)
                           .run();
  if (result.diagnostics.empty()) {
    result.bundle = std::move(merged);
  } else {
    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                     [&documents](const Diagnostic& a, const Diagnostic& b) {
                       auto doc_index = [&documents](const std::string& origin) {
                         for (std::size_t i = 0; i < documents.size(); ++i)
                           if (documents[i].origin == origin) return i;
                         return documents.size();
                       };
                       const auto da = doc_index(a.origin), db = doc_index(b.origin);
                       if (da != db) return da < db;
                       return a.position < b.position;
                     });
  }
  return result;
}

inline ParseResult parse(const SourceDocument& document) {
  return parse(std::span<const SourceDocument>(&document, 1));
}

inline ParseResult parse(std::string text, std::string origin = "<input>") {
  return parse(SourceDocument{std::move(text), std::move(origin)});
}

// ---------------------------------------------------------------------------
// Serialization.

namespace detail {

inline std::string number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string comma_list(const std::vector<std::string>& names) {
  return ethica::detail::join(names, ", ");
}

inline std::string boolean(bool v) { return v ? "true" : "false"; }

}  // namespace detail

inline std::string serialize(const Bundle& b) {
  using detail::comma_list;
  std::string out;
  auto line = [&out](int indent, const std::string& text) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += text;
    out += '\n';
  };
  auto item_gap = [&out] {
    if (!out.empty()) out += '\n';
  };

  for (const auto& m : b.models) {
    item_gap();
    line(0, "model " + m.name + " {");
    line(1, "actions" + (m.actions.empty() ? "" : " " + comma_list(m.actions)) + ";");
    std::vector<std::string> bg;
    for (const auto& n : m.background) {
      auto it = m.background_defaults.find(n);
      bg.push_back(n + " = " + detail::boolean(it != m.background_defaults.end() && it->second));
    }
    line(1, "background" + (bg.empty() ? "" : " " + comma_list(bg)) + ";");
    line(1, "consequences" + (m.consequences.empty() ? "" : " " + comma_list(m.consequences)) +
                ";");
    line(1, "mechanisms");
    for (const auto& mech : m.mechanisms)
      line(2, mech.consequent + " := " + to_string(mech.antecedent) + ";");
    line(1, "utilities");
    for (const auto& [v, u] : m.utilities) line(2, v + " : " + detail::number(u) + ";");
    line(1, "intentions");
    for (const auto& i : m.intentions) line(2, i.action + " -> " + i.consequence + ";");
    line(1, std::string("mode ") + to_string(m.mode) + ";");
    line(0, "}");
  }

  for (const auto& p : b.policies) {
    item_gap();
    line(0, "policy " + p.name + " {");
    for (const auto& pr : p.principles) {
      if (pr.is_vacuous) continue;
      std::string text = "principle " + pr.id + " : " + std::to_string(pr.rank);
      if (!pr.description.empty()) text += " " + detail::quoted(pr.description);
      line(1, text + ";");
    }
    line(0, "}");
  }

  for (const auto& s : b.plan_sets) {
    item_gap();
    line(0, "plans " + s.name + " {");
    line(1, "policy " + s.policy + ";");
    for (const auto& p : s.plans)
      line(1, "plan " + p.id +
                  (p.violations.empty() ? "" : " violates " + comma_list(p.violations)) + ";");
    line(0, "}");
  }

  for (const auto& a : b.annotation_sets) {
    item_gap();
    const auto& ann = a.annotations;
    line(0, "annotations " + a.name + " {");
    line(1, "tasks " + std::to_string(ann.n_tasks()) + ";");
    line(1, "laws " + std::to_string(ann.n_laws()) + ";");
    for (std::size_t law = 0; law < ann.n_laws(); ++law)
      for (std::size_t i = 0; i < ann.n_tasks(); ++i)
        for (std::size_t j = i + 1; j < ann.n_tasks(); ++j) {
          const auto p = ann.get(law, i, j);
          if (p == Preference::incomparable) continue;
          const bool first = p == Preference::first_preferred;
          line(1, "l" + std::to_string(law + 1) + " : t" +
                      std::to_string((first ? i : j) + 1) + " < t" +
                      std::to_string((first ? j : i) + 1) + ";");
        }
    line(0, "}");
  }

  for (const auto& d : b.spaces) {
    item_gap();
    line(0, "space " + d.name + " {");
    line(1, std::string("kind ") + to_string(d.kind) + ";");
    switch (d.kind) {
      case SpaceKind::pde_backgrounds: {
        line(1, "model " + d.source + ";");
        if (!d.vary.empty()) line(1, "vary " + comma_list(d.vary) + ";");
        if (!d.fixed.empty()) {
          std::vector<std::string> fixed;
          for (const auto& [n, v] : d.fixed) fixed.push_back(n + " = " + detail::boolean(v));
          line(1, "fix " + comma_list(fixed) + ";");
        }
        break;
      }
      case SpaceKind::governor_annotations: {
        line(1, "tasks " + std::to_string(d.n_tasks) + ";");
        line(1, "laws " + std::to_string(d.n_laws) + ";");
        if (!d.law_order.empty()) {
          std::vector<std::string> laws;
          for (std::size_t l : d.law_order) laws.push_back("l" + std::to_string(l + 1));
          line(1, "law_order " + comma_list(laws) + ";");
        }
        break;
      }
      case SpaceKind::plan_availability:
        line(1, "plans " + d.source + ";");
        break;
    }
    line(0, "}");
  }

  for (const auto& p : b.properties) {
    item_gap();
    line(0, "property " + p.name + " {");
    line(1, std::string(to_string(p.quantifier)) + " scenario : " + to_string(p.condition));
    line(0, "}");
  }

  for (const auto& s : b.suites) {
    item_gap();
    line(0, "suite " + s.name + " {");
    for (const auto& c : s.checks) line(1, "check " + c.space + " : " + c.property + ";");
    line(0, "}");
  }
  return out;
}

}  // namespace ethica::dsl
