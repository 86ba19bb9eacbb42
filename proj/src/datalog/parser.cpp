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

#include "moodlog/datalog/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace moodlog::datalog {

std::string to_string(const ParseError& error) {
  return to_string(error.span) + ": " + error.message;
}

namespace {

enum class Tok {
  ident,
  wildcard,
  directive,
  string,
  integer,
  floating,
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  dot,
  semicolon,
  colon,
  turnstile,
  bang,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  plus,
  minus,
  star,
  slash,
  error,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

bool is_comparison(Tok t) {
  return t == Tok::eq || t == Tok::ne || t == Tok::lt || t == Tok::le || t == Tok::gt || t == Tok::ge;
}

bool is_arith(Tok t) { return t == Tok::plus || t == Tok::minus || t == Tok::star || t == Tok::slash; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::end: return "end of input";
    case Tok::string: return "string \"" + t.text + "\"";
    case Tok::directive: return "directive '." + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<ParseError>& errors) : src_(src), errors_(errors) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::end, "", span_from(line_, col_)});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
      line_has_token_ = false;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span_from(int line, int col) const { return SourceSpan{line, col, line_, col_}; }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) {
          errors_.push_back(ParseError{span_from(line, col), "unterminated block comment"});
          return;
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, int line, int col) {
    return Token{kind, std::string(src_.substr(start_, pos_ - start_)), span_from(line, col)};
  }

  Token next() {
    int line = line_, col = col_;
    start_ = pos_;
    bool first_on_line = !line_has_token_;
    line_has_token_ = true;
    char c = peek();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      Token t = make(Tok::ident, line, col);
      if (t.text == "_") t.kind = Tok::wildcard;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        return make(Tok::floating, line, col);
      }
      return make(Tok::integer, line, col);
    }
    if (c == '"') return string_literal(line, col);
    if (c == '.' && first_on_line && std::isalpha(static_cast<unsigned char>(peek(1)))) {
      advance();
      std::size_t name_start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      Token t = make(Tok::directive, line, col);
      t.text = std::string(src_.substr(name_start, pos_ - name_start));
      return t;
    }

    advance();
    switch (c) {
      case '(': return make(Tok::lparen, line, col);
      case ')': return make(Tok::rparen, line, col);
      case '{': return make(Tok::lbrace, line, col);
      case '}': return make(Tok::rbrace, line, col);
      case ',': return make(Tok::comma, line, col);
      case '.': return make(Tok::dot, line, col);
      case ';': return make(Tok::semicolon, line, col);
      case '+': return make(Tok::plus, line, col);
      case '-': return make(Tok::minus, line, col);
      case '*': return make(Tok::star, line, col);
      case '/': return make(Tok::slash, line, col);
      case '=': return make(Tok::eq, line, col);
      case ':':
        if (peek() == '-') {
          advance();
          return make(Tok::turnstile, line, col);
        }
        return make(Tok::colon, line, col);
      case '!':
        if (peek() == '=') {
          advance();
          return make(Tok::ne, line, col);
        }
        return make(Tok::bang, line, col);
      case '<':
        if (peek() == '=') {
          advance();
          return make(Tok::le, line, col);
        }
        return make(Tok::lt, line, col);
      case '>':
        if (peek() == '=') {
          advance();
          return make(Tok::ge, line, col);
        }
        return make(Tok::gt, line, col);
      default: break;
    }
    Token t = make(Tok::error, line, col);
    errors_.push_back(ParseError{t.span, "unexpected character '" + t.text + "'"});
    return t;
  }

  Token string_literal(int line, int col) {
    advance();
    std::string value;
    while (pos_ < src_.size() && peek() != '"' && peek() != '\n') {
      if (peek() == '\\' && (peek(1) == '"' || peek(1) == '\\')) {
        advance();
      }
      value += peek();
      advance();
    }
    if (peek() != '"') {
      Token t = Token{Tok::error, value, span_from(line, col)};
      errors_.push_back(ParseError{t.span, "unterminated string constant"});
      return t;
    }
    advance();
    return Token{Tok::string, std::move(value), span_from(line, col)};
  }

  std::string_view src_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  std::size_t start_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool line_has_token_ = false;
};

// Thrown inside a statement; `silent` marks errors the lexer already reported.
struct SyntaxError {
  SourceSpan span;
  std::string message;
  bool silent = false;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseError>& errors)
      : toks_(std::move(tokens)), errors_(errors) {}

  Program run() {
    Program program;
    while (peek().kind != Tok::end && errors_.size() < kMaxParseErrors) {
      std::size_t statement_start = pos_;
      try {
        statement(program);
      } catch (const SyntaxError& e) {
        if (!e.silent) errors_.push_back(ParseError{e.span, e.message});
        recover(statement_start);
      }
    }
    if (errors_.size() > kMaxParseErrors) errors_.resize(kMaxParseErrors);
    return program;
  }

  std::optional<Atom> ground_atom() {
    Atom a = atom();
    if (peek().kind == Tok::dot) take();
    if (peek().kind != Tok::end) fail(peek(), "unexpected " + describe(peek()) + " after atom");
    return a;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_ = t.span;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string message) {
    throw SyntaxError{at.span, std::move(message), at.kind == Tok::error};
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      fail(peek(), "expected " + std::string(what) + " but found " + describe(peek()));
    }
    return take();
  }

  SourceSpan span_since(const SourceSpan& start) const {
    return SourceSpan{start.line, start.column, last_.end_line, last_.end_column};
  }

  // Directives end at the line break; rules and facts end at the final dot.
  void recover(std::size_t statement_start) {
    const bool directive = toks_[statement_start].kind == Tok::directive;
    const int line = toks_[statement_start].span.line;
    if (pos_ == statement_start) take();
    while (peek().kind != Tok::end) {
      if (peek().kind == Tok::directive) return;
      if (directive) {
        if (peek().span.line > line) return;
        take();
        continue;
      }
      if (take().kind == Tok::dot) return;
    }
  }

  void statement(Program& program) {
    const Token& t = peek();
    if (t.kind == Tok::directive) {
      directive(program);
    } else if (t.kind == Tok::ident) {
      clause(program);
    } else {
      fail(t, "expected a directive, rule or fact but found " + describe(t));
    }
  }

  void directive(Program& program) {
    const Token& d = take();
    if (d.text == "decl") {
      Declaration decl;
      const Token& name = expect(Tok::ident, "relation name");
      decl.name = name.text;
      expect(Tok::lparen, "'('");
      if (peek().kind != Tok::rparen) {
        while (true) {
          const Token& pname = expect(Tok::ident, "attribute name");
          expect(Tok::colon, "':'");
          const Token& tname = expect(Tok::ident, "attribute type");
          auto type = parse_type_name(tname.text);
          if (!type) fail(tname, "unsupported attribute type '" + tname.text + "' (expected symbol, number or float)");
          decl.params.push_back(Param{pname.text, *type});
          if (peek().kind != Tok::comma) break;
          take();
        }
      }
      expect(Tok::rparen, "')'");
      decl.span = span_since(d.span);
      program.declarations.push_back(std::move(decl));
    } else if (d.text == "input" || d.text == "output") {
      auto& list = d.text == "input" ? program.inputs : program.outputs;
      while (true) {
        const Token& name = expect(Tok::ident, "relation name");
        list.push_back(RelationRef{name.text, name.span});
        if (peek().kind == Tok::lparen) fail(peek(), "I/O parameters are not supported");
        if (peek().kind != Tok::comma) break;
        take();
      }
    } else {
      fail(d, "unknown directive '." + d.text + "'");
    }
  }

  void clause(Program& program) {
    SourceSpan start = peek().span;
    Atom head = atom();
    if (peek().kind == Tok::dot) {
      take();
      program.facts.push_back(std::move(head));
      return;
    }
    expect(Tok::turnstile, "':-' or '.'");
    Rule rule;
    rule.head = std::move(head);
    rule.body = top_level_body();
    expect(Tok::dot, "',' ';' or '.' to end the rule");
    rule.span = span_since(start);
    program.rules.push_back(std::move(rule));
  }

  Conjunction top_level_body() {
    std::vector<Conjunction> branches = disjunction();
    if (branches.size() == 1) return std::move(branches.front());
    Conjunction body;
    body.push_back(BodyElement{Disjunction{std::move(branches)}});
    return body;
  }

  std::vector<Conjunction> disjunction() {
    std::vector<Conjunction> branches;
    branches.push_back(conjunction());
    while (peek().kind == Tok::semicolon) {
      take();
      branches.push_back(conjunction());
    }
    return branches;
  }

  Conjunction conjunction() {
    Conjunction out;
    while (true) {
      element(out);
      if (peek().kind != Tok::comma) return out;
      take();
    }
  }

  // A '(' opens a disjunction group unless the matching ')' is followed by
  // an operator, in which case it is a parenthesised arithmetic term.
  bool opens_group() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      Tok k = toks_[i].kind;
      if (k == Tok::lparen) {
        ++depth;
      } else if (k == Tok::rparen) {
        if (--depth == 0) {
          Tok after = i + 1 < toks_.size() ? toks_[i + 1].kind : Tok::end;
          return !is_comparison(after) && !is_arith(after);
        }
      } else if (k == Tok::dot || k == Tok::end || k == Tok::directive) {
        return true;
      }
    }
    return true;
  }

  void element(Conjunction& out) {
    if (peek().kind == Tok::lparen && opens_group()) {
      take();
      std::vector<Conjunction> branches = disjunction();
      expect(Tok::rparen, "')' to close the group");
      if (branches.size() == 1) {
        for (BodyElement& e : branches.front()) out.push_back(std::move(e));
      } else {
        out.push_back(BodyElement{Disjunction{std::move(branches)}});
      }
      return;
    }
    out.push_back(BodyElement{literal()});
  }

  Literal literal() {
    SourceSpan start = peek().span;
    if (peek().kind == Tok::bang) {
      take();
      Atom a = atom();
      return Literal{AtomLiteral{std::move(a), true}, span_since(start)};
    }
    if (peek().kind == Tok::ident && peek(1).kind == Tok::lparen) {
      Atom a = atom();
      return Literal{AtomLiteral{std::move(a), false}, span_since(start)};
    }
    Term lhs = term();
    if (!is_comparison(peek().kind)) {
      fail(peek(), "expected a comparison operator but found " + describe(peek()));
    }
    CompareOp op = comparison(take().kind);
    Term rhs = term();
    return Literal{Constraint{op, std::move(lhs), std::move(rhs)}, span_since(start)};
  }

  static CompareOp comparison(Tok t) {
    switch (t) {
      case Tok::eq: return CompareOp::eq;
      case Tok::ne: return CompareOp::ne;
      case Tok::lt: return CompareOp::lt;
      case Tok::le: return CompareOp::le;
      case Tok::gt: return CompareOp::gt;
      default: return CompareOp::ge;
    }
  }

  Atom atom() {
    SourceSpan start = peek().span;
    const Token& name = expect(Tok::ident, "relation name");
    Atom a;
    a.relation = name.text;
    expect(Tok::lparen, "'(' after relation name");
    if (peek().kind != Tok::rparen) {
      while (true) {
        a.args.push_back(term());
        if (peek().kind != Tok::comma) break;
        take();
      }
    }
    expect(Tok::rparen, "')' to close the argument list");
    a.span = span_since(start);
    return a;
  }

  Term term() {
    Term lhs = product();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      ArithOp op = take().kind == Tok::plus ? ArithOp::add : ArithOp::sub;
      lhs = Term::arith(op, std::move(lhs), product());
    }
    return lhs;
  }

  Term product() {
    Term lhs = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      ArithOp op = take().kind == Tok::star ? ArithOp::mul : ArithOp::div;
      lhs = Term::arith(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Term unary() {
    if (peek().kind != Tok::minus) return primary();
    take();
    if (peek().kind == Tok::integer || peek().kind == Tok::floating) {
      return number(take(), true);
    }
    return Term::arith(ArithOp::sub, Term::constant(Value::number(0)), unary());
  }

  Term number(const Token& t, bool negative) {
    std::string text = (negative ? "-" : "") + t.text;
    if (t.kind == Tok::integer) {
      std::int64_t n = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        fail(t, "integer constant out of range: " + text);
      }
      return Term::constant(Value::number(n));
    }
    double d = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc() || !std::isfinite(d)) fail(t, "invalid float constant: " + text);
    return Term::constant(Value::floating(d));
  }

  Term primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
      case Tok::floating: return number(take(), false);
      case Tok::string: return Term::constant(Value::symbol(take().text));
      case Tok::wildcard: take(); return Term::wildcard();
      case Tok::lparen: {
        take();
        Term inner = term();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident: {
        if (t.text == "count" && peek(1).kind == Tok::colon) return count();
        if (peek(1).kind == Tok::lparen) {
          fail(t, "'" + t.text + "(...)' is not allowed inside a term");
        }
        return Term::variable(take().text);
      }
      default: fail(t, "expected a term but found " + describe(t));
    }
  }

  Term count() {
    take();
    take();
    if (peek().kind == Tok::lbrace) {
      take();
      Atom target = atom();
      if (peek().kind == Tok::comma) fail(peek(), "count aggregates over a single atom only");
      expect(Tok::rbrace, "'}' to close the aggregate body");
      return Term::count(std::move(target));
    }
    return Term::count(atom());
  }

  std::vector<Token> toks_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  SourceSpan last_;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  std::vector<Token> tokens = Lexer(source, result.errors).run();
  result.program = Parser(std::move(tokens), result.errors).run();
  std::stable_sort(result.errors.begin(), result.errors.end(), [](const ParseError& a, const ParseError& b) {
    return std::pair(a.span.line, a.span.column) < std::pair(b.span.line, b.span.column);
  });
  if (result.errors.size() > kMaxParseErrors) result.errors.resize(kMaxParseErrors);
  return result;
}

std::optional<Atom> parse_ground_atom(std::string_view text, std::string* error) {
  std::vector<ParseError> errors;
  std::vector<Token> tokens = Lexer(text, errors).run();
  if (!errors.empty()) {
    if (error) *error = to_string(errors.front());
    return std::nullopt;
  }
  Parser parser(std::move(tokens), errors);
  try {
    std::optional<Atom> atom = parser.ground_atom();
    for (const Term& t : atom->args) {
      if (!t.is<Constant>()) {
        if (error) *error = "atom argument '" + to_string(t) + "' is not a constant";
        return std::nullopt;
      }
    }
    return atom;
  } catch (const SyntaxError& e) {
    if (error) *error = to_string(e.span) + ": " + e.message;
    return std::nullopt;
  }
}

}  // namespace moodlog::datalog
