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
#include <string>
#include <vector>

namespace ethica {

enum class ViolationCode {
  duplicate_name,
  missing_mechanism,
  duplicate_mechanism,
  mechanism_for_non_consequence,
  undeclared_reference,
  mechanism_cycle,
  bad_intention,
  non_finite_utility,
  missing_vacuous_principle,
  vacuous_not_maximal,
  multiple_vacuous_principles,
};

inline const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::duplicate_name: return "duplicate_name";
    case ViolationCode::missing_mechanism: return "missing_mechanism";
    case ViolationCode::duplicate_mechanism: return "duplicate_mechanism";
    case ViolationCode::mechanism_for_non_consequence:
      return "mechanism_for_non_consequence";
    case ViolationCode::undeclared_reference: return "undeclared_reference";
    case ViolationCode::mechanism_cycle: return "mechanism_cycle";
    case ViolationCode::bad_intention: return "bad_intention";
    case ViolationCode::non_finite_utility: return "non_finite_utility";
    case ViolationCode::missing_vacuous_principle:
      return "missing_vacuous_principle";
    case ViolationCode::vacuous_not_maximal: return "vacuous_not_maximal";
    case ViolationCode::multiple_vacuous_principles:
      return "multiple_vacuous_principles";
  }
  return "unknown";
}

struct Violation {
  ViolationCode code;
  std::string message;
  // Names involved, in a deterministic order. For cycles this is the cycle
  // path starting at its earliest-declared member.
  std::vector<std::string> subjects;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(ViolationCode code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [code](const Violation& v) { return v.code == code; });
  }
};

}  // namespace ethica
