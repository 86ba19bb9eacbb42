// Copyright 2026 The Moodlog Authors
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

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moodlog/datalog/value.hpp"

namespace moodlog::datalog {

// 1-based line/column range; end column is exclusive.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  bool operator==(const SourceSpan&) const = default;
};

std::string to_string(const SourceSpan& span);

struct Term;

struct Atom {
  std::string relation;
  std::vector<Term> args;
  SourceSpan span;
};

struct Variable {
  std::string name;
};

struct Wildcard {};

struct Constant {
  Value value;
};

enum class ArithOp { add, sub, mul, div };

struct ArithExpr {
  ArithOp op;
  std::shared_ptr<const Term> lhs;
  std::shared_ptr<const Term> rhs;
};

// `count:Target(...)`. Variables of the target that occur elsewhere in the
// rule are the grouping key; all other positions are counted over.
struct CountAggregate {
  std::shared_ptr<const Atom> target;
};

struct Term {
  using Node = std::variant<Variable, Wildcard, Constant, ArithExpr, CountAggregate>;
  Node node;

  static Term variable(std::string name) { return Term{Variable{std::move(name)}}; }
  static Term wildcard() { return Term{Wildcard{}}; }
  static Term constant(Value v) { return Term{Constant{std::move(v)}}; }
  static Term arith(ArithOp op, Term lhs, Term rhs);
  static Term count(Atom target);

  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
  template <class T>
  const T& as() const { return std::get<T>(node); }
};

bool operator==(const Term& a, const Term& b);
bool operator==(const Atom& a, const Atom& b);  // ignores span

enum class CompareOp { eq, ne, lt, le, gt, ge };

struct AtomLiteral {
  Atom atom;
  bool negated = false;
};

struct Constraint {
  CompareOp op;
  Term lhs;
  Term rhs;
};

struct Literal {
  std::variant<AtomLiteral, Constraint> node;
  SourceSpan span;

  bool is_atom() const { return std::holds_alternative<AtomLiteral>(node); }
  bool is_positive() const { return is_atom() && !std::get<AtomLiteral>(node).negated; }
  bool is_negated() const { return is_atom() && std::get<AtomLiteral>(node).negated; }
  bool is_constraint() const { return std::holds_alternative<Constraint>(node); }
  const Atom& atom() const { return std::get<AtomLiteral>(node).atom; }
  const Constraint& constraint() const { return std::get<Constraint>(node); }
};

bool operator==(const Literal& a, const Literal& b);  // ignores span

struct BodyElement;
using Conjunction = std::vector<BodyElement>;

// Parenthesised `a ; b ; c` group inside a conjunction. A top-level
// disjunctive body is a single element holding one of these.
struct Disjunction {
  std::vector<Conjunction> branches;
};

struct BodyElement {
  std::variant<Literal, Disjunction> node;

  bool is_literal() const { return std::holds_alternative<Literal>(node); }
  const Literal& literal() const { return std::get<Literal>(node); }
  const Disjunction& disjunction() const { return std::get<Disjunction>(node); }
};

struct Rule {
  Atom head;
  Conjunction body;
  SourceSpan span;

  // True when the body contains no disjunction groups.
  bool is_conjunctive() const;
  // Body literals of a conjunctive rule; throws std::logic_error otherwise.
  std::vector<Literal> literals() const;
};

struct Param {
  std::string name;
  ValueType type;
};

struct Declaration {
  std::string name;
  std::vector<Param> params;
  SourceSpan span;

  std::size_t arity() const { return params.size(); }
};

struct RelationRef {
  std::string name;
  SourceSpan span;
};

struct Program {
  std::vector<Declaration> declarations;
  std::vector<RelationRef> inputs;
  std::vector<RelationRef> outputs;
  std::vector<Rule> rules;
  std::vector<Atom> facts;

  const Declaration* find_declaration(std::string_view name) const;
  bool is_input(std::string_view name) const;
  bool is_output(std::string_view name) const;
};

// Program-syntax rendering.
std::string to_string(ArithOp op);
std::string to_string(CompareOp op);
std::string to_string(const Term& term);
std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);
std::string to_string(const Conjunction& body);
std::string to_string(const Rule& rule);

// Variable names in order of first occurrence. Variables inside a count
// aggregate are included.
void collect_variables(const Term& term, std::vector<std::string>& out);
void collect_variables(const Atom& atom, std::vector<std::string>& out);
void collect_variables(const Literal& literal, std::vector<std::string>& out);

}  // namespace moodlog::datalog
