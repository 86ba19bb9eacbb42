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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace moodlog::datalog {

// Column types supported by `.decl`.
enum class ValueType { symbol, number, floating };

std::string_view type_name(ValueType type);
std::optional<ValueType> parse_type_name(std::string_view name);

// A ground value: symbol, signed 64-bit integer or IEEE double.
// Ordering is total as long as no NaN is ever stored (the parsers reject it).
class Value {
 public:
  Value() : storage_(std::int64_t{0}) {}

  static Value symbol(std::string text) { return Value(Storage(std::move(text))); }
  static Value number(std::int64_t n) { return Value(Storage(n)); }
  static Value floating(double d) { return Value(Storage(d)); }

  ValueType type() const {
    switch (storage_.index()) {
      case 0: return ValueType::symbol;
      case 1: return ValueType::number;
      default: return ValueType::floating;
    }
  }
  bool is_symbol() const { return storage_.index() == 0; }
  bool is_number() const { return storage_.index() == 1; }
  bool is_float() const { return storage_.index() == 2; }
  bool is_numeric() const { return !is_symbol(); }

  const std::string& as_symbol() const { return std::get<std::string>(storage_); }
  std::int64_t as_number() const { return std::get<std::int64_t>(storage_); }
  double as_float() const { return std::get<double>(storage_); }
  // Numeric value widened to double; precondition is_numeric().
  double as_double() const {
    return is_number() ? static_cast<double>(as_number()) : as_float();
  }

  bool operator==(const Value&) const = default;
  std::partial_ordering operator<=>(const Value& other) const {
    return storage_ <=> other.storage_;
  }
  bool operator<(const Value& other) const { return storage_ < other.storage_; }

 private:
  using Storage = std::variant<std::string, std::int64_t, double>;
  explicit Value(Storage s) : storage_(std::move(s)) {}
  Storage storage_;
};

using Tuple = std::vector<Value>;

// Shortest round-trip decimal text; floats always carry a decimal point.
std::string format_float(double d);

// Symbols quoted (program syntax) or bare (fact-file syntax).
std::string format_value(const Value& v, bool quote_symbols = true);
std::string format_tuple(const Tuple& t, bool quote_symbols = true);

// Converts an integer into the float column type; other mismatches return nullopt.
std::optional<Value> coerce(const Value& v, ValueType column);

// Parses a bare field from a fact file according to the column type.
std::optional<Value> parse_field(std::string_view text, ValueType column);

}  // namespace moodlog::datalog
