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

#include "moodlog/datalog/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace moodlog::datalog {

std::string_view type_name(ValueType type) {
  switch (type) {
    case ValueType::symbol: return "symbol";
    case ValueType::number: return "number";
    case ValueType::floating: return "float";
  }
  return "?";
}

std::optional<ValueType> parse_type_name(std::string_view name) {
  if (name == "symbol") return ValueType::symbol;
  if (name == "number") return ValueType::number;
  if (name == "float") return ValueType::floating;
  return std::nullopt;
}

std::string format_float(double d) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  std::string text(buf.data(), end);
  if (std::isfinite(d) && text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

std::string format_value(const Value& v, bool quote_symbols) {
  switch (v.type()) {
    case ValueType::symbol: {
      if (!quote_symbols) return v.as_symbol();
      std::string out = "\"";
      for (char c : v.as_symbol()) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return out;
    }
    case ValueType::number: return std::to_string(v.as_number());
    case ValueType::floating: return format_float(v.as_float());
  }
  return {};
}

std::string format_tuple(const Tuple& t, bool quote_symbols) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += format_value(t[i], quote_symbols);
  }
  return out;
}

std::optional<Value> coerce(const Value& v, ValueType column) {
  if (v.type() == column) return v;
  if (v.is_number() && column == ValueType::floating) {
    return Value::floating(static_cast<double>(v.as_number()));
  }
  return std::nullopt;
}

std::optional<Value> parse_field(std::string_view text, ValueType column) {
  switch (column) {
    case ValueType::symbol:
      return Value::symbol(std::string(text));
    case ValueType::number: {
      std::int64_t n = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
      return Value::number(n);
    }
    case ValueType::floating: {
      double d = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(d)) {
        return std::nullopt;
      }
      return Value::floating(d);
    }
  }
  return std::nullopt;
}

}  // namespace moodlog::datalog
