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

#include "support/random_programs.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "moodlog/datalog/analysis.hpp"

namespace moodlog::testing {

namespace {

struct Rel {
  std::string name;
  int arity;
  int level;  // 0 = input
};

class Generator {
 public:
  Generator(std::uint32_t seed, RandomProgramOptions options) : rng_(seed), options_(options) {}

  std::string run() {
    int count = uniform(2, 6);
    int inputs = std::min(count - 1, uniform(1, 2));
    for (int i = 0; i < count; ++i) {
      int level = i < inputs ? 0 : uniform(1, 3);
      rels_.push_back(Rel{"R" + std::to_string(i), uniform(1, 3), level});
    }
    std::sort(rels_.begin() + inputs, rels_.end(), [](const Rel& a, const Rel& b) { return a.level < b.level; });

    std::ostringstream out;
    for (const Rel& r : rels_) {
      out << ".decl " << r.name << "(";
      for (int c = 0; c < r.arity; ++c) out << (c ? ", " : "") << "c" << c << ":number";
      out << ")\n";
    }
    int facts = uniform(0, 30);
    for (int f = 0; f < facts; ++f) {
      const Rel& r = rels_[static_cast<std::size_t>(uniform(0, inputs - 1))];
      out << r.name << "(";
      for (int c = 0; c < r.arity; ++c) out << (c ? ", " : "") << uniform(0, 4);
      out << ").\n";
    }
    int rules = uniform(1, 12);
    for (int i = 0; i < rules; ++i) {
      const Rel& head = rels_[static_cast<std::size_t>(uniform(inputs, count - 1))];
      out << rule_for(head) << "\n";
    }
    return out.str();
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int percent) { return uniform(1, 100) <= percent; }

  std::vector<const Rel*> at_most(int level, bool strict) {
    std::vector<const Rel*> out;
    for (const Rel& r : rels_) {
      if (strict ? r.level < level : r.level <= level) out.push_back(&r);
    }
    return out;
  }

  const Rel* pick(const std::vector<const Rel*>& from) {
    return from[static_cast<std::size_t>(uniform(0, static_cast<int>(from.size()) - 1))];
  }

  std::string var() { return std::string(1, static_cast<char>('a' + uniform(0, 3))); }

  // Positive atom; records the variables it binds.
  std::string atom(const Rel& r, std::set<std::string>& bound) {
    std::string s = r.name + "(";
    for (int c = 0; c < r.arity; ++c) {
      if (c) s += ", ";
      int k = uniform(1, 10);
      if (k <= 6) {
        std::string v = var();
        bound.insert(v);
        s += v;
      } else if (k <= 8) {
        s += std::to_string(uniform(0, 4));
      } else {
        s += "_";
      }
    }
    return s + ")";
  }

  std::string bound_term(const std::set<std::string>& bound) {
    if (bound.empty() || chance(30)) return std::to_string(uniform(0, 4));
    auto it = bound.begin();
    std::advance(it, uniform(0, static_cast<int>(bound.size()) - 1));
    return *it;
  }

  std::string rule_for(const Rel& head) {
    std::vector<std::string> body;
    std::set<std::string> bound;
    auto positive = at_most(head.level, false);
    auto lower = at_most(head.level, true);
    bool recursive = false;

    int atoms = uniform(1, 3);
    for (int i = 0; i < atoms; ++i) {
      const Rel* r = pick(positive);
      recursive |= r->level == head.level;
      body.push_back(atom(*r, bound));
    }
    if (options_.disjunctions && chance(60)) {
      // Each branch binds the same variables so the head stays safe.
      std::set<std::string> vars = bound;
      if (chance(50) && !vars.empty()) {
        std::string v = bound_term(vars);
        body.push_back("(" + v + " = " + std::to_string(uniform(0, 4)) + "; " + v + " > " +
                       std::to_string(uniform(0, 4)) + ")");
      } else {
        const Rel* a = pick(positive);
        const Rel* b = pick(positive);
        recursive |= a->level == head.level || b->level == head.level;
        std::set<std::string> ba, bb;
        std::string sa = atom(*a, ba), sb = atom(*b, bb);
        // Only variables bound on both sides (or before) count as bound afterwards.
        for (const auto& v : ba) {
          if (bb.contains(v)) bound.insert(v);
        }
        body.push_back("(" + sa + "; " + sb + ")");
      }
    }
    if (options_.negation && !lower.empty() && chance(40)) {
      const Rel* r = pick(lower);
      std::string s = "!" + r->name + "(";
      for (int c = 0; c < r->arity; ++c) s += (c ? ", " : "") + (chance(25) ? std::string("_") : bound_term(bound));
      body.push_back(s + ")");
    }
    if (chance(40) && !bound.empty()) {
      static const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
      std::string lhs = bound_term(bound);
      if (chance(30)) lhs += " + " + bound_term(bound);
      body.push_back(lhs + " " + ops[uniform(0, 5)] + " " + bound_term(bound));
    }

    std::string h = head.name + "(";
    for (int c = 0; c < head.arity; ++c) {
      if (c) h += ", ";
      if (options_.aggregates && !lower.empty() && c == head.arity - 1 && chance(25)) {
        const Rel* r = pick(lower);
        std::string agg = "count:" + r->name + "(";
        for (int k = 0; k < r->arity; ++k) {
          int choice = uniform(1, 3);
          agg += (k ? ", " : "") + (choice == 1 ? bound_term(bound) : choice == 2 ? std::string("_") : "l" + var());
        }
        h += agg + ")";
      } else if (!recursive && chance(15) && !bound.empty()) {
        h += bound_term(bound) + " + 1";
      } else {
        h += bound_term(bound);
      }
    }
    h += ")";
    std::string out = h + " :- ";
    for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ", " : "") + body[i];
    return out + ".";
  }

  std::mt19937 rng_;
  RandomProgramOptions options_;
  std::vector<Rel> rels_;
};

}  // namespace

std::string random_program(std::uint32_t seed, RandomProgramOptions options) {
  // A handful of draws can be unsafe (a group variable that only occurs in a
  // disjunct); try successive sub-seeds until the program checks.
  for (std::uint32_t attempt = 0;; ++attempt) {
    std::string text = Generator(seed * 7919u + attempt, options).run();
    auto parsed = datalog::parse(text);
    if (!parsed.ok()) continue;
    auto expanded = datalog::expand_disjunctions(parsed.program);
    if (!datalog::check_safety(expanded).empty()) continue;
    if (!datalog::find_unstratifiable_cycles(expanded).empty()) continue;
    return text;
  }
}

}  // namespace moodlog::testing
