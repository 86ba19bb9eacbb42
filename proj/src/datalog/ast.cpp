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

#include "moodlog/datalog/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace moodlog::datalog {

std::string to_string(const SourceSpan& span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

Term Term::arith(ArithOp op, Term lhs, Term rhs) {
  return Term{ArithExpr{op, std::make_shared<const Term>(std::move(lhs)),
                        std::make_shared<const Term>(std::move(rhs))}};
}

Term Term::count(Atom target) {
  return Term{CountAggregate{std::make_shared<const Atom>(std::move(target))}};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          return true;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ArithExpr>) {
          return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
        } else {
          return *x.target == *y.target;
        }
      },
      a.node);
}

bool operator==(const Atom& a, const Atom& b) {
  return a.relation == b.relation && a.args == b.args;
}

bool operator==(const Literal& a, const Literal& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.is_atom()) {
    return a.is_negated() == b.is_negated() && a.atom() == b.atom();
  }
  const Constraint& x = a.constraint();
  const Constraint& y = b.constraint();
  return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
}

bool Rule::is_conjunctive() const {
  return std::all_of(body.begin(), body.end(), [](const BodyElement& e) { return e.is_literal(); });
}

std::vector<Literal> Rule::literals() const {
  std::vector<Literal> out;
  out.reserve(body.size());
  for (const BodyElement& e : body) {
    if (!e.is_literal()) throw std::logic_error("rule body still contains a disjunction");
    out.push_back(e.literal());
  }
  return out;
}

const Declaration* Program::find_declaration(std::string_view name) const {
  for (const Declaration& d : declarations) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

bool Program::is_input(std::string_view name) const {
  return std::any_of(inputs.begin(), inputs.end(), [&](const RelationRef& r) { return r.name == name; });
}

bool Program::is_output(std::string_view name) const {
  return std::any_of(outputs.begin(), outputs.end(), [&](const RelationRef& r) { return r.name == name; });
}

std::string to_string(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
    case ArithOp::div: return "/";
  }
  return "?";
}

std::string to_string(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "!=";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
  }
  return "?";
}

namespace {

int precedence(ArithOp op) { return op == ArithOp::add || op == ArithOp::sub ? 1 : 2; }

std::string term_text(const Term& term, int parent_precedence, bool right_operand) {
  if (term.is<ArithExpr>()) {
    const ArithExpr& e = term.as<ArithExpr>();
    int p = precedence(e.op);
    std::string text = term_text(*e.lhs, p, false) + " " + to_string(e.op) + " " + term_text(*e.rhs, p, true);
    bool parens = p < parent_precedence || (right_operand && p == parent_precedence);
    return parens ? "(" + text + ")" : text;
  }
  return to_string(term);
}

}  // namespace

std::string to_string(const Term& term) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          return "_";
        } else if constexpr (std::is_same_v<T, Constant>) {
          return format_value(x.value);
        } else if constexpr (std::is_same_v<T, ArithExpr>) {
          return term_text(Term{x}, 0, false);
        } else {
          return "count:" + to_string(*x.target);
        }
      },
      term.node);
}

std::string to_string(const Atom& atom) {
  std::string out = atom.relation + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(atom.args[i]);
  }
  return out + ")";
}

std::string to_string(const Literal& literal) {
  if (literal.is_atom()) return (literal.is_negated() ? "!" : "") + to_string(literal.atom());
  const Constraint& c = literal.constraint();
  return to_string(c.lhs) + " " + to_string(c.op) + " " + to_string(c.rhs);
}

std::string to_string(const Conjunction& body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    const BodyElement& e = body[i];
    if (e.is_literal()) {
      out += to_string(e.literal());
      continue;
    }
    const auto& branches = e.disjunction().branches;
    // A lone top-level disjunction prints without parentheses.
    bool bare = body.size() == 1;
    if (!bare) out += "(";
    for (std::size_t b = 0; b < branches.size(); ++b) {
      if (b) out += "; ";
      out += to_string(branches[b]);
    }
    if (!bare) out += ")";
  }
  return out;
}

std::string to_string(const Rule& rule) {
  return to_string(rule.head) + " :- " + to_string(rule.body) + ".";
}

void collect_variables(const Term& term, std::vector<std::string>& out) {
  auto add = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  if (term.is<Variable>()) {
    add(term.as<Variable>().name);
  } else if (term.is<ArithExpr>()) {
    collect_variables(*term.as<ArithExpr>().lhs, out);
    collect_variables(*term.as<ArithExpr>().rhs, out);
  } else if (term.is<CountAggregate>()) {
    collect_variables(*term.as<CountAggregate>().target, out);
  }
}

void collect_variables(const Atom& atom, std::vector<std::string>& out) {
  for (const Term& t : atom.args) collect_variables(t, out);
}

void collect_variables(const Literal& literal, std::vector<std::string>& out) {
  if (literal.is_atom()) {
    collect_variables(literal.atom(), out);
  } else {
    collect_variables(literal.constraint().lhs, out);
    collect_variables(literal.constraint().rhs, out);
  }
}

}  // namespace moodlog::datalog
