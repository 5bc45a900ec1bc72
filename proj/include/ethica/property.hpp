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

#include <string>
#include <utility>
#include <vector>

namespace ethica {

/// `name(arg, ...)`, resolved against a scenario by the verifier.
struct Atom {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const Atom&) const = default;
};

class PropertyExpr {
 public:
  enum class Kind { constant, atom, negation, conjunction, disjunction, implication };

  static PropertyExpr constant(bool value) {
    PropertyExpr e(Kind::constant);
    e.value_ = value;
    return e;
  }
  static PropertyExpr atom(Atom a) {
    PropertyExpr e(Kind::atom);
    e.atom_ = std::move(a);
    return e;
  }
  static PropertyExpr negate(PropertyExpr operand) {
    PropertyExpr e(Kind::negation);
    e.operands_.push_back(std::move(operand));
    return e;
  }
  static PropertyExpr conj(PropertyExpr l, PropertyExpr r) {
    return binary(Kind::conjunction, std::move(l), std::move(r));
  }
  static PropertyExpr disj(PropertyExpr l, PropertyExpr r) {
    return binary(Kind::disjunction, std::move(l), std::move(r));
  }
  static PropertyExpr implies(PropertyExpr l, PropertyExpr r) {
    return binary(Kind::implication, std::move(l), std::move(r));
  }

  Kind kind() const { return kind_; }
  bool value() const { return value_; }
  const Atom& atom() const { return atom_; }
  const PropertyExpr& operand() const { return operands_.front(); }
  const PropertyExpr& lhs() const { return operands_[0]; }
  const PropertyExpr& rhs() const { return operands_[1]; }

  template <typename Resolve>
  bool evaluate(const Resolve& resolve) const {
    switch (kind_) {
      case Kind::constant: return value_;
      case Kind::atom: return resolve(atom_);
      case Kind::negation: return !operands_[0].evaluate(resolve);
      case Kind::conjunction:
        return operands_[0].evaluate(resolve) && operands_[1].evaluate(resolve);
      case Kind::disjunction:
        return operands_[0].evaluate(resolve) || operands_[1].evaluate(resolve);
      case Kind::implication:
        return !operands_[0].evaluate(resolve) || operands_[1].evaluate(resolve);
    }
    return false;
  }

  template <typename Visit>
  void for_each_atom(const Visit& visit) const {
    if (kind_ == Kind::atom) visit(atom_);
    for (const auto& op : operands_) op.for_each_atom(visit);
  }

  bool operator==(const PropertyExpr& other) const {
    return kind_ == other.kind_ && value_ == other.value_ &&
           atom_ == other.atom_ && operands_ == other.operands_;
  }

 private:
  explicit PropertyExpr(Kind kind) : kind_(kind) {}

  static PropertyExpr binary(Kind kind, PropertyExpr l, PropertyExpr r) {
    PropertyExpr e(kind);
    e.operands_.push_back(std::move(l));
    e.operands_.push_back(std::move(r));
    return e;
  }

  Kind kind_;
  bool value_ = false;
  Atom atom_;
  std::vector<PropertyExpr> operands_;
};

enum class Quantifier { forall, exists };

inline const char* to_string(Quantifier q) {
  return q == Quantifier::forall ? "forall" : "exists";
}

struct PropertySpec {
  std::string name;
  Quantifier quantifier = Quantifier::forall;
  PropertyExpr condition = PropertyExpr::constant(true);

  bool operator==(const PropertySpec&) const = default;
};

inline std::string to_string(const Atom& a) {
  std::string out = a.name + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i != 0) out += ", ";
    out += a.args[i];
  }
  return out + ")";
}

namespace detail {

// implies (right-associative) < or < and < not < atoms
inline int precedence(PropertyExpr::Kind kind) {
  using K = PropertyExpr::Kind;
  switch (kind) {
    case K::implication: return 0;
    case K::disjunction: return 1;
    case K::conjunction: return 2;
    case K::negation: return 3;
    default: return 4;
  }
}

inline void render(const PropertyExpr& e, std::string& out) {
  using K = PropertyExpr::Kind;
  auto sub = [&out](const PropertyExpr& child, bool parenthesize) {
    if (parenthesize) out += '(';
    render(child, out);
    if (parenthesize) out += ')';
  };
  switch (e.kind()) {
    case K::constant: out += e.value() ? "true" : "false"; break;
    case K::atom: out += to_string(e.atom()); break;
    case K::negation:
      out += "not ";
      sub(e.operand(), precedence(e.operand().kind()) < precedence(K::negation));
      break;
    case K::implication: {
      sub(e.lhs(), precedence(e.lhs().kind()) <= precedence(K::implication));
      out += " implies ";
      sub(e.rhs(), precedence(e.rhs().kind()) < precedence(K::implication));
      break;
    }
    case K::conjunction:
    case K::disjunction: {
      const int p = precedence(e.kind());
      sub(e.lhs(), precedence(e.lhs().kind()) < p);
      out += e.kind() == K::conjunction ? " and " : " or ";
      sub(e.rhs(), precedence(e.rhs().kind()) <= p);
      break;
    }
  }
}

}  // namespace detail

inline std::string to_string(const PropertyExpr& e) {
  std::string out;
  detail::render(e, out);
  return out;
}

}  // namespace ethica
