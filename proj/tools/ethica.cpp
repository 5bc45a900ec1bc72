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

// ethica: validate bundles, check permissibility, select plans and tasks,
// run verification suites and explain causal links.
//
// Exit status: 0 on a positive result, 1 on a negative one (no permissible
// world, a property failed, invalid documents), 2 on usage or input errors.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ethica/ethica.hpp"
#include "report.hpp"

#ifndef ETHICA_VERSION
#define ETHICA_VERSION "0.0.0"
#endif
#ifndef ETHICA_FIXTURE_DIR
#define ETHICA_FIXTURE_DIR "fixtures"
#endif

namespace {

using ethica::report::Json;
namespace fs = std::filesystem;

constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput {
  std::vector<ethica::dsl::Diagnostic> diagnostics;
};

struct Options {
  std::vector<std::string> inputs;
  std::string format = "text";
};

std::vector<std::string> default_inputs() {
  std::vector<std::string> out;
  const char* env = std::getenv("ETHICA_FIXTURE_DIR");
  const fs::path dir = env != nullptr ? env : ETHICA_FIXTURE_DIR;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".ethica") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

ethica::dsl::Bundle load(const std::vector<std::string>& paths) {
  std::vector<ethica::dsl::SourceDocument> docs;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw UsageError("cannot read '" + p + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    docs.push_back({ss.str(), p});
  }
  auto r = ethica::dsl::parse(docs);
  if (!r.ok()) throw InvalidInput{std::move(r.diagnostics)};
  return std::move(*r.bundle);
}

bool color_enabled() {
  const char* v = std::getenv("ETHICA_COLOR");
  if (v == nullptr) return false;
  const std::string s = v;
  if (s == "always" || s == "1" || s == "true") return true;
  if (s == "auto") return isatty(STDOUT_FILENO) != 0;
  return false;
}

void emit(const Options& o, const Json& doc) {
  if (o.format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << ethica::report::render_text(doc, ethica::report::Style(color_enabled()));
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "T") return true;
  if (v == "false" || v == "0" || v == "F") return false;
  throw UsageError("'" + key + "' needs true or false, got '" + v + "'");
}

std::size_t parse_indexed(const std::string& word, char prefix, std::size_t count,
                          const char* what) {
  if (word.size() >= 2 && word[0] == prefix) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), v);
    if (ec == std::errc() && p == word.data() + word.size() && v >= 1 && v <= count) return v - 1;
  }
  throw UsageError("'" + word + "' is not " + what);
}

// --- commands ----------------------------------------------------------------

int cmd_validate(const Options& o, const std::vector<std::string>& files) {
  const auto paths = files.empty() ? o.inputs : files;
  const auto b = load(paths);
  Json doc = ethica::report::document(ETHICA_VERSION, "validate");
  doc["reports"].push_back({{"type", "validation"},
                            {"files", paths},
                            {"counts",
                             {{"models", b.models.size()},
                              {"policies", b.policies.size()},
                              {"plan_sets", b.plan_sets.size()},
                              {"annotation_sets", b.annotation_sets.size()},
                              {"spaces", b.spaces.size()},
                              {"properties", b.properties.size()},
                              {"suites", b.suites.size()}}}});
  emit(o, doc);
  return 0;
}

int cmd_check(const Options& o, const std::string& model_name,
              const std::vector<std::string>& sets) {
  const auto b = load(o.inputs);
  ethica::CausalAgencyModel m = ethica::dsl::find_model(b, model_name);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set needs key=value, got '" + s + "'");
    const std::string key = s.substr(0, eq), value = s.substr(eq + 1);
    if (key.rfind("u.", 0) == 0) {
      const std::string var = key.substr(2);
      if (!m.kind_of(var)) throw UsageError("no variable '" + var + "' in '" + m.name + "'");
      double u = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), u);
      if (ec != std::errc() || p != value.data() + value.size() || !std::isfinite(u))
        throw UsageError("'" + key + "' needs a finite number, got '" + value + "'");
      m.utilities[var] = u;
    } else if (key.rfind("bg.", 0) == 0) {
      const std::string var = key.substr(3);
      if (m.kind_of(var) != ethica::VariableKind::background)
        throw UsageError("'" + var + "' is not a background variable of '" + m.name + "'");
      m.background_defaults[var] = parse_bool(value, key);
    } else if (key == "mode") {
      if (value == "power_set") m.mode = ethica::ActionMode::power_set;
      else if (value == "exactly_one") m.mode = ethica::ActionMode::exactly_one;
      else throw UsageError("mode must be power_set or exactly_one, got '" + value + "'");
    } else {
      throw UsageError("unknown --set key '" + key + "' (use u.NAME, bg.NAME or mode)");
    }
  }
  const auto verdicts = ethica::permissible_worlds(m, m.default_background());
  Json doc = ethica::report::document(ETHICA_VERSION, "check");
  bool any = false;
  for (const auto& v : verdicts) {
    doc["reports"].push_back(ethica::report::to_json(v, m));
    any = any || v.permissible;
  }
  emit(o, doc);
  return any ? 0 : kNegative;
}

int cmd_select(const Options& o, const std::string& policy_name, const std::string& plans_name) {
  const auto b = load(o.inputs);
  const auto& policy = ethica::dsl::find_policy(b, policy_name);
  const auto& plans = ethica::dsl::find_plan_set(b, plans_name);
  const auto sel = ethica::select_plan(policy, plans.plans);
  Json doc = ethica::report::document(ETHICA_VERSION, "select");
  doc["reports"].push_back({{"type", "plan_selection"},
                            {"policy", policy.name},
                            {"plans", plans.name},
                            {"selection", ethica::report::to_json(sel)}});
  emit(o, doc);
  return 0;
}

int cmd_govern(const Options& o, const std::string& name, const std::vector<std::string>& order) {
  const auto b = load(o.inputs);
  const auto& ann = ethica::dsl::find_annotations(b, name).annotations;
  std::vector<std::size_t> law_order;
  for (const auto& w : order) law_order.push_back(parse_indexed(w, 'l', ann.n_laws(), "a law"));
  if (!law_order.empty()) {
    ethica::ScenarioSpace probe{"govern", ethica::GovernorSpace{ann.n_tasks(), ann.n_laws(), law_order}};
    for (const auto& p : ethica::space_problems(probe)) throw UsageError(p);
  } else {
    for (std::size_t l = 0; l < ann.n_laws(); ++l) law_order.push_back(l);
  }
  const auto sel = ethica::Governor(law_order).select(ann);
  std::vector<std::string> laws;
  for (auto l : law_order) laws.push_back(ethica::report::law_name(l));
  Json doc = ethica::report::document(ETHICA_VERSION, "govern");
  doc["reports"].push_back({{"type", "task_selection"},
                            {"annotations", name},
                            {"law_order", laws},
                            {"scenario", ethica::report::to_json(ann)},
                            {"selection", ethica::report::to_json(sel)}});
  emit(o, doc);
  return 0;
}

int cmd_verify(const Options& o, const std::string& suite, std::size_t cap, std::size_t workers) {
  if (workers == 0) throw UsageError("--workers must be at least 1");
  if (cap == 0) throw UsageError("--max-counterexamples must be at least 1");
  const auto b = load(o.inputs);
  const auto entries = ethica::dsl::resolve_suite(b, suite);
  Json doc = ethica::report::document(ETHICA_VERSION, "verify");
  bool all = true;
  for (const auto& e : entries) {
    const auto r = ethica::check_property(e.space, e.property, {}, {cap, workers});
    all = all && r.outcome == ethica::Outcome::holds;
    doc["reports"].push_back(ethica::report::to_json(r, e.space, suite));
  }
  emit(o, doc);
  return all ? 0 : kNegative;
}

// World spec: a comma list of name=value over actions and background
// variables; the entries "all" and "none" set every action at once.
// Background variables not mentioned keep their declared defaults; actions
// default to false.
ethica::World parse_world(const ethica::CausalAgencyModel& m, const std::string& spec) {
  ethica::Assignment a = m.default_background();
  for (const auto& act : m.actions) a[act] = false;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "all" || item == "none") {
      for (const auto& act : m.actions) a[act] = item == "all";
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError("world entry '" + item + "' needs name=value (or all, none)");
    const std::string name = item.substr(0, eq);
    const auto kind = m.kind_of(name);
    if (kind != ethica::VariableKind::action && kind != ethica::VariableKind::background)
      throw UsageError("'" + name + "' is not an action or background variable of '" + m.name +
                       "'");
    a[name] = parse_bool(item.substr(eq + 1), name);
  }
  return ethica::evaluate(m, std::move(a));
}

int cmd_explain(const Options& o, const std::string& model_name, const std::string& world,
                const std::string& cause, const std::string& effect) {
  const auto b = load(o.inputs);
  const auto& m = ethica::dsl::find_model(b, model_name);
  const auto w = parse_world(m, world);
  const auto q = ethica::is_cause(m, w, cause, effect);
  Json report{{"type", "causal_explanation"},
              {"model", m.name},
              {"cause", cause},
              {"effect", effect},
              {"verdict", to_string(q.verdict)},
              {"factual", ethica::report::to_json(w.valuation())}};
  if (q.witness) {
    report["counterfactual"] = ethica::report::to_json(q.witness->counterfactual);
  } else if (q.verdict == ethica::CauseVerdict::effect_survives) {
    report["counterfactual"] = ethica::report::to_json(ethica::intervene(m, w, cause).world.valuation());
  } else {
    report["counterfactual"] = nullptr;
  }
  Json doc = ethica::report::document(ETHICA_VERSION, "explain");
  doc["reports"].push_back(report);
  emit(o, doc);
  return q ? 0 : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permissibility checks, ethical plan and task selection, and scenario verification"};
  app.set_version_flag("--version", ETHICA_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  app.add_option("-i,--input", opts.inputs, ".ethica files to load (default: bundled fixtures)");
  app.add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::vector<std::string> files;
  auto* validate = app.add_subcommand("validate", "parse and cross-check documents");
  validate->add_option("files", files, "files to validate (default: the inputs)");

  std::string model, world, cause, effect, policy, plans, annotations, suite;
  std::vector<std::string> sets, law_order;
  auto* check = app.add_subcommand("check", "permissibility of every world of a model");
  check->add_option("model", model)->required();
  check->add_option("--set", sets, "override u.NAME=number, bg.NAME=bool or mode=...");

  auto* select = app.add_subcommand("select", "pick a plan under an ethical policy");
  select->add_option("policy", policy)->required();
  select->add_option("plans", plans)->required();

  auto* govern = app.add_subcommand("govern", "pick a task from per-law annotations");
  govern->add_option("annotations", annotations)->required();
  govern->add_option("--law-order", law_order, "laws from most to least important")
      ->delimiter(',');

  std::size_t cap = 10, workers = 1;
  auto* verify = app.add_subcommand("verify", "check every property of a suite");
  verify->add_option("suite", suite)->required();
  verify->add_option("--max-counterexamples", cap)->capture_default_str();
  verify->add_option("--workers", workers)->capture_default_str();

  auto* explain = app.add_subcommand("explain", "but-for causal link in one world");
  explain->add_option("model", model)->required();
  explain->add_option("world", world, "all, none, or name=value,...")->required();
  explain->add_option("cause", cause)->required();
  explain->add_option("effect", effect)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  if (opts.inputs.empty()) opts.inputs = default_inputs();

  try {
    if (*validate) return cmd_validate(opts, files);
    if (opts.inputs.empty()) throw UsageError("no input files (use -i)");
    if (*check) return cmd_check(opts, model, sets);
    if (*select) return cmd_select(opts, policy, plans);
    if (*govern) return cmd_govern(opts, annotations, law_order);
    if (*verify) return cmd_verify(opts, suite, cap, workers);
    if (*explain) return cmd_explain(opts, model, world, cause, effect);
  } catch (const InvalidInput& e) {
    for (const auto& d : e.diagnostics) std::cerr << d.format() << "\n";
    return *validate ? kNegative : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ethica::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
