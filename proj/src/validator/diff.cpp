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
#include "moodlog/validator/diff.hpp"

#include <map>

#include "moodlog/datalog/parser.hpp"

namespace moodlog::validator {

namespace dl = datalog;

namespace {

class Renamer {
 public:
  dl::Term term(const dl::Term& t) {
    if (t.is<dl::Variable>()) return dl::Term::variable(name(t.as<dl::Variable>().name));
    if (t.is<dl::ArithExpr>()) {
      const auto& e = t.as<dl::ArithExpr>();
      return dl::Term::arith(e.op, term(*e.lhs), term(*e.rhs));
    }
    if (t.is<dl::CountAggregate>()) return dl::Term::count(atom(*t.as<dl::CountAggregate>().target));
    return t;
  }

  dl::Atom atom(const dl::Atom& a) {
    dl::Atom out{a.relation, {}, {}};
    for (const auto& t : a.args) out.args.push_back(term(t));
    return out;
  }

  dl::Conjunction body(const dl::Conjunction& conj) {
    dl::Conjunction out;
    for (const auto& element : conj) {
      if (element.is_literal()) {
        const dl::Literal& l = element.literal();
        dl::Literal copy = l;
        copy.span = {};
        if (l.is_atom()) {
          copy.node = dl::AtomLiteral{atom(l.atom()), l.is_negated()};
        } else {
          copy.node = dl::Constraint{l.constraint().op, term(l.constraint().lhs), term(l.constraint().rhs)};
        }
        out.push_back({copy});
      } else {
        dl::Disjunction d;
        for (const auto& branch : element.disjunction().branches) d.branches.push_back(body(branch));
        out.push_back({d});
      }
    }
    return out;
  }

 private:
  std::string name(const std::string& original) {
    auto [it, fresh] = names_.emplace(original, "");
    if (fresh) it->second = "V" + std::to_string(names_.size());
    return it->second;
  }

  std::map<std::string, std::string> names_;
};

std::string canonical(const dl::Rule& rule) {
  Renamer r;
  dl::Rule out;
  out.head = r.atom(rule.head);
  out.body = r.body(rule.body);
  return dl::to_string(out);
}

std::vector<std::string> canonical_clauses(const dl::Program& program) {
  std::vector<std::string> out;
  for (const auto& fact : program.facts) out.push_back(dl::to_string(fact) + ".");
  for (const auto& rule : program.rules) out.push_back(canonical(rule));
  return out;
}

dl::Program parse_side(std::string_view source, const char* side) {
  auto result = dl::parse(source);
  if (!result.ok()) throw DiffError(std::string(side) + " does not parse: " + dl::to_string(result.errors.front()));
  return std::move(result.program);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::string canonical_rule_text(std::string_view rule_source) {
  dl::Program program = parse_side(rule_source, "rule");
  if (program.rules.empty()) throw DiffError("no rule in '" + std::string(rule_source) + "'");
  return canonical(program.rules.front());
}

std::vector<std::string> significant_lines(std::string_view source) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string line;
    bool quoted = false;
    bool space = false;
    for (std::size_t i = start; i < end; ++i) {
      char c = source[i];
      if (!quoted && c == '/' && i + 1 < end && source[i + 1] == '/') break;
      if (c == '"' && (i == start || source[i - 1] != '\\')) quoted = !quoted;
      if (!quoted && (c == ' ' || c == '\t' || c == '\r')) {
        space = !line.empty();
        continue;
      }
      if (space) line += ' ';
      space = false;
      line += c;
    }
    if (!line.empty()) out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

RuleDiff diff_programs(std::string_view candidate, std::string_view reference) {
  auto before = canonical_clauses(parse_side(candidate, "candidate"));
  auto after = canonical_clauses(parse_side(reference, "reference"));

  RuleDiff diff;
  std::map<std::string, int> remaining;
  for (const auto& clause : after) ++remaining[clause];
  for (const auto& clause : before) {
    auto it = remaining.find(clause);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      diff.unchanged.push_back(clause);
    } else {
      diff.removed.push_back(clause);
    }
  }
  std::map<std::string, int> kept;
  for (const auto& clause : diff.unchanged) ++kept[clause];
  for (const auto& clause : after) {
    auto it = kept.find(clause);
    if (it != kept.end() && it->second > 0) {
      --it->second;
    } else {
      diff.added.push_back(clause);
    }
  }

  auto lines_before = significant_lines(candidate);
  auto lines_after = significant_lines(reference);
  std::size_t common = lcs_length(lines_before, lines_after);
  diff.lines_before = lines_before.size();
  diff.lines_after = lines_after.size();
  diff.lines_removed = diff.lines_before - common;
  diff.lines_added = diff.lines_after - common;
  return diff;
}

}  // namespace moodlog::validator
