// Copyright 2026 The transmon-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// TOML helpers shared by the file loaders. Not part of the public API.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "toml.hpp"
#include "twin/errors.hpp"

namespace twin::detail {

inline toml::table parse_toml(std::string_view text, std::string_view source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& err) {
    std::ostringstream msg;
    msg << source << ":" << err.source().begin.line << ": " << err.description();
    throw ParseError(msg.str());
  }
}

[[noreturn]] inline void parse_fail(std::string_view source, const std::string& what) {
  throw ParseError(std::string(source) + ": " + what);
}

inline double require_number(const toml::table& table, std::string_view key,
                      std::string_view source, const std::string& where) {
  const auto* node = table.get(key);
  if (node == nullptr) {
    parse_fail(source, where + ": missing key '" + std::string(key) + "'");
  }
  if (auto v = node->value<double>()) return *v;
  parse_fail(source, where + ": key '" + std::string(key) + "' must be a number");
}

inline void reject_unknown_keys(const toml::table& table,
                         std::initializer_list<std::string_view> allowed,
                         std::string_view source, const std::string& where) {
  for (const auto& [key, node] : table) {
    if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
      parse_fail(source, where + ": unknown key '" + std::string(key.str()) + "'");
    }
  }
}

/// Shortest round-trip text of a double, always with a decimal point.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace twin::detail
