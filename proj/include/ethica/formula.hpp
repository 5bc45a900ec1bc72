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

// Propositional formulas over named variables. Used for mechanism
// antecedents and, with atoms instead of variables, for scenario properties
// (see property.hpp).

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ethica {

class Formula {
 public:
  enum class Kind { constant, variable, negation, conjunction, disjunction };

  static Formula constant(bool value) {
    Formula f(Kind::constant);
    f.value_ = value;
    return f;
  }
  static Formula var(std::string name) {
    Formula f(Kind::variable);
    f.name_ = std::move(name);
    return f;
  }
  static Formula negate(Formula operand) {
    Formula f(Kind::negation);
    f.operands_.push_back(std::move(operand));
    return f;
  }
  static Formula conj(Formula lhs, Formula rhs) {
    return binary(Kind::conjunction, std::move(lhs), std::move(rhs));
  }
  static Formula disj(Formula lhs, Formula rhs) {
    return binary(Kind::disjunction, std::move(lhs), std::move(rhs));
  }

  Kind kind() const { return kind_; }
  bool value() const { return value_; }
  const std::string& name() const { return name_; }
  const Formula& operand() const { return operands_.front(); }
  const Formula& lhs() const { return operands_[0]; }
  const Formula& rhs() const { return operands_[1]; }

  /// `lookup` maps a variable name to its truth value.
  template <typename Lookup>
  bool evaluate(const Lookup& lookup) const {
    switch (kind_) {
      case Kind::constant: return value_;
      case Kind::variable: return lookup(name_);
      case Kind::negation: return !operands_[0].evaluate(lookup);
      case Kind::conjunction:
        return operands_[0].evaluate(lookup) && operands_[1].evaluate(lookup);
      case Kind::disjunction:
        return operands_[0].evaluate(lookup) || operands_[1].evaluate(lookup);
    }
    return false;
  }

  /// Referenced variable names in first-occurrence order, without repeats.
  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    collect(out);
    return out;
  }

  bool operator==(const Formula& other) const {
    return kind_ == other.kind_ && value_ == other.value_ &&
           name_ == other.name_ && operands_ == other.operands_;
  }

 private:
  explicit Formula(Kind kind) : kind_(kind) {}

  static Formula binary(Kind kind, Formula lhs, Formula rhs) {
    Formula f(kind);
    f.operands_.push_back(std::move(lhs));
    f.operands_.push_back(std::move(rhs));
    return f;
  }

  void collect(std::vector<std::string>& out) const {
    if (kind_ == Kind::variable) {
      for (const auto& n : out)
        if (n == name_) return;
      out.push_back(name_);
    }
    for (const auto& op : operands_) op.collect(out);
  }

  Kind kind_;
  bool value_ = false;
  std::string name_;
  std::vector<Formula> operands_;
};

namespace detail {

inline int precedence(Formula::Kind kind) {
  switch (kind) {
    case Formula::Kind::disjunction: return 1;
    case Formula::Kind::conjunction: return 2;
    case Formula::Kind::negation: return 3;
    default: return 4;
  }
}

inline void render(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  auto sub = [&out](const Formula& child, bool parenthesize) {
    if (parenthesize) out += '(';
    render(child, out);
    if (parenthesize) out += ')';
  };
  switch (f.kind()) {
    case K::constant: out += f.value() ? "true" : "false"; break;
    case K::variable: out += f.name(); break;
    case K::negation:
      out += "not ";
      sub(f.operand(), precedence(f.operand().kind()) < precedence(K::negation));
      break;
    case K::conjunction:
    case K::disjunction: {
      // Binary connectives parse left-associatively, so a right child of
      // equal precedence needs parentheses to survive a round trip.
      const int p = precedence(f.kind());
      sub(f.lhs(), precedence(f.lhs().kind()) < p);
      out += f.kind() == K::conjunction ? " and " : " or ";
      sub(f.rhs(), precedence(f.rhs().kind()) <= p);
      break;
    }
  }
}

}  // namespace detail

/// Surface syntax using `not`, `and`, `or`; parses back to an equal tree.
inline std::string to_string(const Formula& f) {
  std::string out;
  detail::render(f, out);
  return out;
}

}  // namespace ethica
