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
#include "moodlog/validator/lint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <variant>

#include "moodlog/datalog/analysis.hpp"
#include "moodlog/datalog/parser.hpp"

namespace moodlog::validator {

namespace dl = datalog;

namespace {

const char* code_for(dl::SemanticErrorKind kind) {
  switch (kind) {
    case dl::SemanticErrorKind::undeclared_relation: return "L1";
    case dl::SemanticErrorKind::arity_mismatch: return "L2";
    case dl::SemanticErrorKind::type_mismatch: return "L3";
    case dl::SemanticErrorKind::unsafe_variable: return "L4";
  }
  return "L1";
}

void add_unique(std::vector<Diagnostic>& out, Diagnostic d) {
  if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
}

void collect_body_relations(const dl::Term& term, std::set<std::string>& out) {
  if (term.is<dl::CountAggregate>()) {
    out.insert(term.as<dl::CountAggregate>().target->relation);
  } else if (term.is<dl::ArithExpr>()) {
    collect_body_relations(*term.as<dl::ArithExpr>().lhs, out);
    collect_body_relations(*term.as<dl::ArithExpr>().rhs, out);
  }
}

// Relations read by some rule, counting aggregate targets anywhere.
std::set<std::string> read_relations(const dl::Program& program) {
  std::set<std::string> out;
  for (const auto& rule : program.rules) {
    for (const auto& arg : rule.head.args) collect_body_relations(arg, out);
    for (const auto& literal : rule.literals()) {
      if (literal.is_atom()) {
        out.insert(literal.atom().relation);
      } else {
        collect_body_relations(literal.constraint().lhs, out);
        collect_body_relations(literal.constraint().rhs, out);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// L8: do two Diagnosis rules exclude each other?
//
// Each body is abstracted into positive and negated atom patterns over the
// shared patient variable plus numeric intervals for the other variables.
// The positive patterns are closed under the program's negation-free rules,
// so `History(P, "manic", N), N >= 1` also yields `EverManic(P)` when the
// program defines it that way. Two bodies exclude each other when one
// negates a pattern the other entails, or when both constrain the same
// tuple key to disjoint numeric ranges.
// ---------------------------------------------------------------------------

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = false;
  bool hi_open = false;

  static Interval point(double v) { return {v, v, false, false}; }

  void intersect(const Interval& o) {
    if (o.lo > lo || (o.lo == lo && o.lo_open)) {
      lo = o.lo;
      lo_open = o.lo_open;
    }
    if (o.hi < hi || (o.hi == hi && o.hi_open)) {
      hi = o.hi;
      hi_open = o.hi_open;
    }
  }
  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
  bool disjoint(const Interval& o) const {
    Interval both = *this;
    both.intersect(o);
    return both.empty();
  }
  bool within(const Interval& o) const {
    bool lo_ok = lo > o.lo || (lo == o.lo && (lo_open || !o.lo_open));
    bool hi_ok = hi < o.hi || (hi == o.hi && (hi_open || !o.hi_open));
    return lo_ok && hi_ok;
  }
};

std::optional<Interval> interval_for(dl::CompareOp op, double c) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (op) {
    case dl::CompareOp::eq: return Interval::point(c);
    case dl::CompareOp::lt: return Interval{-inf, c, false, true};
    case dl::CompareOp::le: return Interval{-inf, c, false, false};
    case dl::CompareOp::gt: return Interval{c, inf, true, false};
    case dl::CompareOp::ge: return Interval{c, inf, false, false};
    case dl::CompareOp::ne: break;
  }
  return std::nullopt;
}

dl::CompareOp flip(dl::CompareOp op) {
  switch (op) {
    case dl::CompareOp::lt: return dl::CompareOp::gt;
    case dl::CompareOp::le: return dl::CompareOp::ge;
    case dl::CompareOp::gt: return dl::CompareOp::lt;
    case dl::CompareOp::ge: return dl::CompareOp::le;
    default: return op;
  }
}

struct PatientArg {
  bool operator==(const PatientArg&) const = default;
};
struct AnyArg {
  bool operator==(const AnyArg&) const = default;
};
struct VarArg {
  std::string name;
  Interval range;
  bool operator==(const VarArg& o) const { return name == o.name; }
};
using Arg = std::variant<PatientArg, dl::Value, VarArg, AnyArg>;

struct Pattern {
  std::string relation;
  std::vector<Arg> args;
};

bool same_arg(const Arg& a, const Arg& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<dl::Value>(a)) return std::get<dl::Value>(a) == std::get<dl::Value>(b);
  if (std::holds_alternative<VarArg>(a)) return std::get<VarArg>(a).name == std::get<VarArg>(b).name;
  return true;
}

bool same_pattern(const Pattern& a, const Pattern& b) {
  if (a.relation != b.relation || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_arg(a.args[i], b.args[i])) return false;
  }
  return true;
}

std::optional<Interval> numeric_range(const Arg& a) {
  if (const auto* v = std::get_if<dl::Value>(&a)) {
    if (v->is_numeric()) return Interval::point(v->as_double());
    return std::nullopt;
  }
  if (const auto* v = std::get_if<VarArg>(&a)) return v->range;
  if (std::holds_alternative<AnyArg>(a)) return Interval{};
  return std::nullopt;
}

struct BodyView {
  std::vector<Pattern> positive;
  std::vector<Pattern> negative;
};

// Abstracts a conjunctive body; `patient` is the variable standing for the patient.
BodyView view_of(const std::vector<dl::Literal>& body, const std::string& patient) {
  std::map<std::string, Interval> ranges;
  for (const auto& literal : body) {
    if (!literal.is_constraint()) continue;
    const auto& c = literal.constraint();
    auto bound = [&](const dl::Term& var, const dl::Term& value, dl::CompareOp op) {
      if (!var.is<dl::Variable>() || !value.is<dl::Constant>()) return;
      const dl::Value& v = value.as<dl::Constant>().value;
      if (!v.is_numeric()) return;
      if (auto range = interval_for(op, v.as_double())) ranges[var.as<dl::Variable>().name].intersect(*range);
    };
    bound(c.lhs, c.rhs, c.op);
    bound(c.rhs, c.lhs, flip(c.op));
  }
  auto arg_of = [&](const dl::Term& term) -> Arg {
    if (term.is<dl::Constant>()) return term.as<dl::Constant>().value;
    if (term.is<dl::Variable>()) {
      const auto& name = term.as<dl::Variable>().name;
      if (name == patient) return PatientArg{};
      auto it = ranges.find(name);
      return VarArg{name, it == ranges.end() ? Interval{} : it->second};
    }
    return AnyArg{};
  };
  BodyView view;
  for (const auto& literal : body) {
    if (!literal.is_atom()) continue;
    Pattern p{literal.atom().relation, {}};
    for (const auto& t : literal.atom().args) p.args.push_back(arg_of(t));
    (literal.is_negated() ? view.negative : view.positive).push_back(std::move(p));
  }
  return view;
}

bool has_aggregate(const dl::Term& t) {
  if (t.is<dl::CountAggregate>()) return true;
  if (t.is<dl::ArithExpr>()) {
    return has_aggregate(*t.as<dl::ArithExpr>().lhs) || has_aggregate(*t.as<dl::ArithExpr>().rhs);
  }
  return false;
}

// Negation-free, aggregate-free rules usable for forward chaining.
std::vector<const dl::Rule*> chaining_rules(const dl::Program& expanded) {
  std::vector<const dl::Rule*> out;
  for (const auto& rule : expanded.rules) {
    bool ok = std::none_of(rule.head.args.begin(), rule.head.args.end(), has_aggregate);
    for (const auto& l : rule.literals()) {
      if (l.is_negated()) ok = false;
      if (l.is_positive()) {
        for (const auto& t : l.atom().args) ok = ok && (t.is<dl::Variable>() || t.is<dl::Constant>() || t.is<dl::Wildcard>());
      }
      if (l.is_constraint()) ok = ok && !has_aggregate(l.constraint().lhs) && !has_aggregate(l.constraint().rhs);
    }
    if (ok) out.push_back(&rule);
  }
  return out;
}

class Closure {
 public:
  Closure(const std::vector<const dl::Rule*>& rules, std::vector<Pattern> facts) : rules_(rules), facts_(std::move(facts)) {}

  std::vector<Pattern> run() {
    for (bool changed = true; changed && facts_.size() < kLimit;) {
      changed = false;
      for (const dl::Rule* rule : rules_) {
        auto body = rule->literals();
        std::vector<const dl::Literal*> atoms;
        for (const auto& l : body) {
          if (l.is_positive()) atoms.push_back(&l);
        }
        if (atoms.empty()) continue;
        std::map<std::string, Arg> sigma;
        std::vector<Pattern> derived;
        match(*rule, body, atoms, 0, sigma, derived);
        for (auto& p : derived) {
          bool known = std::any_of(facts_.begin(), facts_.end(), [&](const Pattern& f) { return same_pattern(f, p); });
          if (!known) {
            facts_.push_back(std::move(p));
            changed = true;
          }
        }
      }
    }
    return facts_;
  }

 private:
  static constexpr std::size_t kLimit = 2000;

  static bool bind(const dl::Term& term, const Arg& value, std::map<std::string, Arg>& sigma) {
    if (term.is<dl::Wildcard>()) return true;
    if (term.is<dl::Constant>()) {
      const dl::Value& c = term.as<dl::Constant>().value;
      if (const auto* v = std::get_if<dl::Value>(&value)) return *v == c || (v->is_numeric() && c.is_numeric() && v->as_double() == c.as_double());
      if (const auto* v = std::get_if<VarArg>(&value)) {
        return c.is_numeric() && v->range.within(Interval::point(c.as_double()));
      }
      return false;
    }
    const auto& name = term.as<dl::Variable>().name;
    auto it = sigma.find(name);
    if (it == sigma.end()) {
      sigma.emplace(name, value);
      return true;
    }
    return same_arg(it->second, value);
  }

  static bool entailed(const dl::Constraint& c, const std::map<std::string, Arg>& sigma) {
    auto side = [&](const dl::Term& t) -> std::optional<Arg> {
      if (t.is<dl::Constant>()) return Arg{t.as<dl::Constant>().value};
      if (t.is<dl::Variable>()) {
        auto it = sigma.find(t.as<dl::Variable>().name);
        if (it != sigma.end()) return it->second;
      }
      return std::nullopt;
    };
    auto lhs = side(c.lhs);
    auto rhs = side(c.rhs);
    if (!lhs || !rhs) return false;
    const auto* constant = std::get_if<dl::Value>(&*rhs);
    dl::CompareOp op = c.op;
    const Arg* other = &*lhs;
    if (!constant || !constant->is_numeric()) {
      constant = std::get_if<dl::Value>(&*lhs);
      op = flip(op);
      other = &*rhs;
    }
    if (!constant || !constant->is_numeric()) return false;
    auto need = interval_for(op, constant->as_double());
    auto have = numeric_range(*other);
    return need && have && !std::holds_alternative<AnyArg>(*other) && have->within(*need);
  }

  void match(const dl::Rule& rule, const std::vector<dl::Literal>& body, const std::vector<const dl::Literal*>& atoms,
             std::size_t i, std::map<std::string, Arg>& sigma, std::vector<Pattern>& out) {
    if (i == atoms.size()) {
      for (const auto& l : body) {
        if (l.is_constraint() && !entailed(l.constraint(), sigma)) return;
      }
      Pattern head{rule.head.relation, {}};
      for (const auto& t : rule.head.args) {
        if (t.is<dl::Constant>()) {
          head.args.push_back(t.as<dl::Constant>().value);
        } else if (t.is<dl::Variable>() && sigma.contains(t.as<dl::Variable>().name)) {
          head.args.push_back(sigma.at(t.as<dl::Variable>().name));
        } else {
          return;
        }
      }
      out.push_back(std::move(head));
      return;
    }
    const dl::Atom& atom = atoms[i]->atom();
    for (std::size_t f = 0; f < facts_.size(); ++f) {
      const Pattern& fact = facts_[f];
      if (fact.relation != atom.relation || fact.args.size() != atom.args.size()) continue;
      auto saved = sigma;
      bool ok = true;
      for (std::size_t k = 0; k < atom.args.size() && ok; ++k) ok = bind(atom.args[k], fact.args[k], sigma);
      if (ok) match(rule, body, atoms, i + 1, sigma, out);
      sigma = std::move(saved);
    }
  }

  const std::vector<const dl::Rule*>& rules_;
  std::vector<Pattern> facts_;
};

// True when the negated pattern rules out the positive one.
bool denies(const Pattern& negated, const Pattern& positive) {
  if (negated.relation != positive.relation || negated.args.size() != positive.args.size()) return false;
  for (std::size_t i = 0; i < negated.args.size(); ++i) {
    const Arg& n = negated.args[i];
    const Arg& p = positive.args[i];
    if (std::holds_alternative<AnyArg>(n)) continue;
    if (std::holds_alternative<PatientArg>(n) && std::holds_alternative<PatientArg>(p)) continue;
    if (const auto* c = std::get_if<dl::Value>(&n)) {
      if (const auto* v = std::get_if<dl::Value>(&p); v && *v == *c) continue;
      if (const auto* v = std::get_if<VarArg>(&p); v && c->is_numeric() && v->range.within(Interval::point(c->as_double()))) continue;
    }
    return false;
  }
  return true;
}

// Same key, disjoint numeric value: both cannot hold if the relation is a
// function of its key columns.
bool disjoint_values(const Pattern& a, const Pattern& b) {
  if (a.relation != b.relation || a.args.size() != b.args.size()) return false;
  bool any_disjoint = false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    auto ra = numeric_range(a.args[i]);
    auto rb = numeric_range(b.args[i]);
    if (ra && rb && ra->disjoint(*rb)) {
      any_disjoint = true;
      continue;
    }
    bool key = (std::holds_alternative<PatientArg>(a.args[i]) && std::holds_alternative<PatientArg>(b.args[i])) ||
               (std::holds_alternative<dl::Value>(a.args[i]) && same_arg(a.args[i], b.args[i]));
    if (!key) return false;
  }
  return any_disjoint;
}

bool exclusive(const BodyView& a, const std::vector<Pattern>& closure_a, const BodyView& b,
               const std::vector<Pattern>& closure_b) {
  for (const auto& n : a.negative) {
    for (const auto& p : closure_b) {
      if (denies(n, p)) return true;
    }
  }
  for (const auto& n : b.negative) {
    for (const auto& p : closure_a) {
      if (denies(n, p)) return true;
    }
  }
  for (const auto& p : closure_a) {
    for (const auto& q : closure_b) {
      if (disjoint_values(p, q)) return true;
    }
  }
  return false;
}

struct DiagnosisRule {
  const dl::Rule* rule;
  std::string disorder;
  BodyView view;
  std::vector<Pattern> closure;
};

void check_exclusivity(const dl::Program& expanded, std::vector<Diagnostic>& out) {
  auto rules = chaining_rules(expanded);
  std::vector<DiagnosisRule> candidates;
  for (const auto& rule : expanded.rules) {
    const auto& head = rule.head;
    if (head.relation != "Diagnosis" || head.args.size() != 2) continue;
    if (!head.args[0].is<dl::Variable>() || !head.args[1].is<dl::Constant>()) continue;
    const dl::Value& disorder = head.args[1].as<dl::Constant>().value;
    if (!disorder.is_symbol()) continue;
    DiagnosisRule d{&rule, disorder.as_symbol(), view_of(rule.literals(), head.args[0].as<dl::Variable>().name), {}};
    d.closure = Closure(rules, d.view.positive).run();
    candidates.push_back(std::move(d));
  }
  std::set<std::pair<int, int>> reported;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const auto& a = candidates[i];
      const auto& b = candidates[j];
      if (a.disorder == b.disorder) continue;
      if (exclusive(a.view, a.closure, b.view, b.closure)) continue;
      if (!reported.emplace(a.rule->span.line, b.rule->span.line).second) continue;
      out.push_back({Severity::warning, "L8",
                     "Diagnosis rules for '" + a.disorder + "' (line " + std::to_string(a.rule->span.line) +
                         ") and '" + b.disorder + "' (line " + std::to_string(b.rule->span.line) +
                         ") can both hold for the same patient; nothing in either body excludes the other",
                     b.rule->span});
    }
  }
}

}  // namespace

std::vector<Diagnostic> lint(std::string_view source) {
  std::vector<Diagnostic> out;
  dl::ParseResult parsed = dl::parse(source);
  for (const auto& e : parsed.errors) out.push_back({Severity::error, "L0", e.message, e.span});
  if (!parsed.ok()) return out;

  dl::Program program = dl::expand_disjunctions(parsed.program);
  for (const auto& e : dl::check_safety(program)) {
    add_unique(out, {Severity::error, code_for(e.kind), e.message, e.span});
  }
  for (const auto& cycle : dl::find_unstratifiable_cycles(program)) {
    dl::SourceSpan span = cycle.spans().empty() ? dl::SourceSpan{} : cycle.spans().front();
    add_unique(out, {Severity::error, "L5", cycle.what(), span});
  }

  std::set<std::string> derived;
  for (const auto& rule : program.rules) derived.insert(rule.head.relation);
  for (const auto& fact : program.facts) derived.insert(fact.relation);
  for (const auto& output : program.outputs) {
    if (program.is_input(output.name) || derived.contains(output.name)) continue;
    add_unique(out, {Severity::warning, "L6", "output relation '" + output.name + "' is never derived", output.span});
  }
  auto read = read_relations(program);
  for (const auto& input : program.inputs) {
    if (read.contains(input.name)) continue;
    add_unique(out, {Severity::warning, "L7", "input relation '" + input.name + "' is never read", input.span});
  }

  check_exclusivity(program, out);
  return out;
}

}  // namespace moodlog::validator
