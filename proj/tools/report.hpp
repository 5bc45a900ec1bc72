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

// Report documents for the command-line tool. Every command builds one JSON
// value {tool_version, command, reports: [...]}; the text format is rendered
// from that value, never from the library types directly.

#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include "ethica/ethica.hpp"
#include "json.hpp"

namespace ethica::report {

using nlohmann::ordered_json;
using Json = ordered_json;

inline std::string number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

inline std::string task_name(std::size_t t) { return "t" + std::to_string(t + 1); }
inline std::string law_name(std::size_t l) { return "l" + std::to_string(l + 1); }

inline Json to_json(const Assignment& a) {
  Json out = Json::object();
  for (const auto& [k, v] : a) out[k] = v;
  return out;
}

inline Json to_json(const CausalWitness& w, const CausalAgencyModel& m) {
  return {{"cause", w.cause},
          {"effect", w.effect},
          {"cause_utility", m.utility(w.cause)},
          {"effect_utility", m.utility(w.effect)},
          {"factual", to_json(w.factual)},
          {"counterfactual", to_json(w.counterfactual)}};
}

inline Json to_json(const ConditionResult& r, const CausalAgencyModel& m) {
  Json out{{"index", r.index}, {"passed", r.passed}};
  if (!r.action.empty()) out["action"] = r.action;
  Json terms = Json::array();
  for (const auto& t : r.terms) terms.push_back({{"variable", t.variable}, {"utility", t.utility}});
  out["terms"] = terms;
  Json chains = Json::array();
  for (const auto& c : r.chains) chains.push_back(to_json(c, m));
  out["chains"] = chains;
  if (r.sum) out["sum"] = *r.sum;
  return out;
}

inline Json to_json(const PermissibilityVerdict& v, const CausalAgencyModel& m) {
  Json conditions = Json::array();
  for (const auto& a : v.per_action)
    for (const auto& r : a.results) conditions.push_back(to_json(r, m));
  for (const auto& r : v.world_conditions) conditions.push_back(to_json(r, m));
  return {{"type", "permissibility"},
          {"model", m.name},
          {"actions", actions_in(m, v.actions_taken)},
          {"world", {{"assignment", to_json(v.world.assignment)},
                     {"derived", to_json(v.world.derived)}}},
          {"permissible", v.permissible},
          {"conditions", conditions}};
}

inline Json to_json(const LawAnnotationSet& a) {
  Json prefs = Json::array();
  for (std::size_t l = 0; l < a.n_laws(); ++l)
    for (std::size_t i = 0; i < a.n_tasks(); ++i)
      for (std::size_t j = i + 1; j < a.n_tasks(); ++j) {
        const auto p = a.get(l, i, j);
        if (p == Preference::incomparable) continue;
        const bool first = p == Preference::first_preferred;
        prefs.push_back({{"law", law_name(l)},
                         {"preferred", task_name(first ? i : j)},
                         {"over", task_name(first ? j : i)}});
      }
  return {{"tasks", a.n_tasks()}, {"laws", a.n_laws()}, {"index", a.index()},
          {"preferences", prefs}};
}

inline Json to_json(const TaskSelection& s) {
  Json trace = Json::array();
  for (const auto& r : s.trace) {
    Json e{{"task", task_name(r.task)}, {"reason", to_string(r.reason)}};
    e["law"] = r.law ? Json(law_name(*r.law)) : Json(nullptr);
    trace.push_back(e);
  }
  return {{"selected", task_name(s.selected)}, {"cycle", s.cycle}, {"trace", trace}};
}

inline Json to_json(const PlanSelection& s) {
  Json just = Json::array();
  for (const auto& r : s.justification) {
    Json e{{"plan", r.plan}};
    e["lost_at_rank"] = r.lost_at_rank ? Json(*r.lost_at_rank) : Json(nullptr);
    just.push_back(e);
  }
  return {{"selected", s.selected.id},
          {"index", s.index},
          {"violations", s.selected.violations},
          {"justification", just}};
}

inline Json scenario_json(const ScenarioSpace& space, const Scenario& s) {
  Json out{{"index", s.index}};
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PdeScenario>) {
          out["background"] = to_json(d.background);
        } else if constexpr (std::is_same_v<T, LawAnnotationSet>) {
          out["annotations"] = to_json(d);
        } else {
          std::vector<std::string> ids;
          for (const auto& p : d.available) ids.push_back(p.id);
          out["mask"] = d.mask;
          out["available"] = ids;
        }
      },
      s.data);
  (void)space;
  return out;
}

inline Json outcome_json(const ScenarioSpace& space, const ScenarioOutcome& o) {
  Json trace;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, std::vector<PermissibilityVerdict>>) {
          const auto& m = std::get<PdeBackgroundSpace>(space.definition).model;
          Json worlds = Json::array();
          for (const auto& v : t) worlds.push_back(to_json(v, m));
          trace = {{"worlds", worlds}};
        } else {
          trace = to_json(t);
        }
      },
      o.trace);
  return {{"scenario", scenario_json(space, o.scenario)},
          {"condition", o.condition},
          {"trace", trace}};
}

inline Json to_json(const VerificationReport& r, const ScenarioSpace& space,
                    const std::string& suite) {
  Json ces = Json::array();
  for (const auto& c : r.counterexamples) ces.push_back(outcome_json(space, c));
  Json out{{"type", "verification"},
           {"suite", suite},
           {"property", r.property},
           {"space", r.space},
           {"kind", to_string(r.kind)},
           {"quantifier", to_string(r.quantifier)},
           {"scenarios_total", r.scenarios_total},
           {"scenarios_checked", r.scenarios_checked},
           {"outcome", to_string(r.outcome)},
           {"violations_found", r.violations_found},
           {"counterexamples", ces}};
  out["witness"] = r.witness ? outcome_json(space, *r.witness) : Json(nullptr);
  out["elapsed_ms"] =
      std::chrono::duration<double, std::milli>(r.elapsed).count();
  return out;
}

inline Json document(const std::string& version, const std::string& command) {
  return {{"tool_version", version}, {"command", command}, {"reports", Json::array()}};
}

// ---------------------------------------------------------------------------
// Text rendering.

class Style {
 public:
  explicit Style(bool enabled) : on_(enabled) {}
  std::string good(const std::string& s) const { return wrap("32", s); }
  std::string bad(const std::string& s) const { return wrap("31", s); }
  std::string bold(const std::string& s) const { return wrap("1", s); }
  std::string dim(const std::string& s) const { return wrap("2", s); }

 private:
  std::string wrap(const char* code, const std::string& s) const {
    return on_ ? "\x1b[" + std::string(code) + "m" + s + "\x1b[0m" : s;
  }
  bool on_;
};

namespace detail {

inline std::string str(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline std::string num(const Json& j) {
  return j.is_number_float() ? number(j.get<double>()) : j.dump();
}

inline std::string names(const Json& arr, const char* empty = "none") {
  if (arr.empty()) return empty;
  std::string out;
  for (const auto& e : arr) out += (out.empty() ? "" : ", ") + str(e);
  return out;
}

inline std::string bools(const Json& obj) {
  std::string out;
  for (const auto& [k, v] : obj.items())
    out += (out.empty() ? "" : ", ") + k + "=" + (v.get<bool>() ? "T" : "F");
  return out;
}

inline std::string chain(const Json& c) {
  return str(c["cause"]) + " ⇝ " + str(c["effect"]) + " (u=" + num(c["cause_utility"]) +
         " → u=" + num(c["effect_utility"]) + ")";
}

inline std::string terms(const Json& ts) {
  std::string out;
  for (const auto& t : ts)
    out += (out.empty() ? "" : ", ") + str(t["variable"]) + " (u=" + num(t["utility"]) + ")";
  return out;
}

inline const char* failure_reason(int index) {
  switch (index) {
    case 1: return "the action itself is bad";
    case 2: return "a bad consequence is intended";
    case 3: return "no good consequence is intended";
    case 4: return "a bad cause brings about an effect";
    case 5: return "total utility is not positive";
  }
  return "failed";
}

inline std::string condition_line(const Json& c, const Style& st) {
  std::string head = "C" + c["index"].dump();
  if (c.contains("action")) head += " " + str(c["action"]);
  const bool passed = c["passed"].get<bool>();
  std::string line = head + ": " + (passed ? st.good("pass") : st.bad("FAIL"));
  std::vector<std::string> details;
  if (!passed) details.push_back(failure_reason(c["index"].get<int>()));
  if (!c["terms"].empty()) details.push_back(terms(c["terms"]));
  for (const auto& ch : c["chains"]) details.push_back(chain(ch));
  if (c.contains("sum")) details.push_back("sum=" + num(c["sum"]));
  for (std::size_t i = 0; i < details.size(); ++i)
    line += (i == 0 ? " — " : "; ") + details[i];
  return line;
}

inline void render_verdict(std::string& out, const Json& v, const Style& st, const std::string& indent) {
  out += indent + "world {" + names(v["actions"], "") + "} [" + bools(v["world"]["assignment"]) +
         "]: " + (v["permissible"].get<bool>() ? st.good("permissible") : st.bad("impermissible")) +
         "\n";
  for (const auto& c : v["conditions"]) out += indent + "  " + condition_line(c, st) + "\n";
}

inline std::string preferences(const Json& a) {
  std::string out;
  for (const auto& p : a["preferences"])
    out += (out.empty() ? "" : ", ") + str(p["law"]) + ": " + str(p["preferred"]) + " ≺ " +
           str(p["over"]);
  return out.empty() ? "all incomparable" : out;
}

inline void render_selection_trace(std::string& out, const Json& s, const std::string& indent) {
  for (const auto& r : s["trace"]) {
    out += indent + str(r["task"]) + " rejected: " + str(r["reason"]);
    if (!r["law"].is_null()) out += " at " + str(r["law"]);
    out += "\n";
  }
}

inline void render_plan_selection(std::string& out, const Json& s, const std::string& indent) {
  out += indent + "selected " + str(s["selected"]) + " (violates " + names(s["violations"]) +
         ")\n";
  for (const auto& r : s["justification"]) {
    out += indent + str(r["plan"]) + " rejected: ";
    out += r["lost_at_rank"].is_null() ? std::string("tie, earlier plan kept")
                                       : "worse at rank " + r["lost_at_rank"].dump();
    out += "\n";
  }
}

inline void render_outcome(std::string& out, const Json& o, const Style& st) {
  const Json& s = o["scenario"];
  out += "    scenario #" + s["index"].dump() + ": ";
  if (s.contains("background")) out += "background [" + bools(s["background"]) + "]\n";
  if (s.contains("annotations")) out += preferences(s["annotations"]) + "\n";
  if (s.contains("available")) out += "available {" + names(s["available"]) + "}\n";
  const Json& t = o["trace"];
  if (t.contains("worlds")) {
    for (const auto& w : t["worlds"]) render_verdict(out, w, st, "      ");
  } else if (t.contains("cycle")) {
    out += "      selected " + str(t["selected"]) + (t["cycle"].get<bool>() ? " (cycle)" : "") + "\n";
    render_selection_trace(out, t, "      ");
  } else {
    render_plan_selection(out, t, "      ");
  }
}

}  // namespace detail

inline std::string render_text(const Json& doc, const Style& st) {
  using namespace detail;
  std::string out;
  const std::string command = str(doc["command"]);
  for (const auto& r : doc["reports"]) {
    const std::string type = str(r["type"]);
    if (type == "validation") {
      out += st.good("ok") + ": " + names(r["files"]) + "\n";
      for (const auto& [k, v] : r["counts"].items()) out += "  " + k + ": " + v.dump() + "\n";
    } else if (type == "permissibility") {
      render_verdict(out, r, st, "");
    } else if (type == "verification") {
      const bool holds = str(r["outcome"]) == "holds";
      out += st.bold(str(r["property"])) + " over " + str(r["space"]) + ": " +
             (holds ? st.good("holds") : st.bad("fails")) + " (" + str(r["quantifier"]) + ", " +
             r["scenarios_checked"].dump() + "/" + r["scenarios_total"].dump() +
             " scenarios checked";
      if (str(r["quantifier"]) == "forall")
        out += ", " + r["violations_found"].dump() + " violations";
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.1f", r["elapsed_ms"].get<double>());
      out += ", " + std::string(ms) + " ms)\n";
      if (!r["counterexamples"].empty()) {
        out += "  counterexamples (first " + std::to_string(r["counterexamples"].size()) + "):\n";
        for (const auto& c : r["counterexamples"]) render_outcome(out, c, st);
      }
      if (!r["witness"].is_null()) {
        out += "  witness:\n";
        render_outcome(out, r["witness"], st);
      }
    } else if (type == "plan_selection") {
      out += "policy " + str(r["policy"]) + ", plans " + str(r["plans"]) + ":\n";
      render_plan_selection(out, r["selection"], "  ");
    } else if (type == "task_selection") {
      out += "annotations " + str(r["annotations"]) + " (" + preferences(r["scenario"]) +
             "), law order " + names(r["law_order"]) + ":\n";
      const Json& s = r["selection"];
      out += "  selected " + str(s["selected"]) + (s["cycle"].get<bool>() ? " (cycle)" : "") + "\n";
      render_selection_trace(out, s, "  ");
    } else if (type == "causal_explanation") {
      const std::string verdict = str(r["verdict"]);
      std::string label = verdict == "cause"             ? st.good("cause")
                          : verdict == "effect_survives" ? st.bad("not a cause (effect survives intervention)")
                                                         : st.bad("not a cause (factuality fails)");
      out += str(r["cause"]) + " ⇝ " + str(r["effect"]) + ": " + label + "\n";
      const Json& f = r["factual"];
      const Json& cf = r["counterfactual"];
      std::size_t width = 8;
      for (const auto& [k, v] : f.items()) width = std::max(width, k.size());
      out += "  " + std::string(width, ' ') + "  factual  counterfactual\n";
      for (const auto& [k, v] : f.items()) {
        std::string row = "  " + k + std::string(width - k.size(), ' ') + "  " +
                          (v.get<bool>() ? "T" : "F") + "        ";
        row += cf.is_null() ? "-" : (cf[k].get<bool>() ? "T" : "F");
        if (!cf.is_null() && cf[k] != v) row += st.dim("  (changed)");
        out += row + "\n";
      }
    }
  }
  if (command == "check") {
    std::size_t n = 0, ok = 0;
    for (const auto& r : doc["reports"]) {
      ++n;
      ok += r["permissible"].get<bool>();
    }
    out += std::to_string(ok) + " of " + std::to_string(n) + " worlds permissible\n";
  }
  if (command == "verify") {
    std::size_t n = 0, ok = 0;
    for (const auto& r : doc["reports"]) {
      ++n;
      ok += str(r["outcome"]) == "holds";
    }
    out += std::to_string(ok) + " of " + std::to_string(n) + " properties hold\n";
  }
  return out;
}

}  // namespace ethica::report
