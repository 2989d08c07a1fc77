#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fdsched/analytics.hpp"
#include "fdsched/errors.hpp"

namespace fdsched {

// Exact rational from "3", "-0.125" or "2/7". Decimal forms parse exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&]() -> Rational {
    throw ConfigError("cannot parse '" + s + "' as a number");
  };
  if (s.empty()) return fail();

  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    try {
      const std::int64_t num = std::stoll(s.substr(0, slash));
      const std::int64_t den = std::stoll(s.substr(slash + 1));
      if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
      return Rational(num, den);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      return fail();
    }
  }

  bool negative = false;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    any_digit = true;
    num = num * 10 + (c - '0');
    if (seen_point) den *= 10;
    if (num < 0 || den < 0) throw ConfigError("number '" + s + "' overflows");
  }
  if (!any_digit) return fail();
  return Rational(negative ? -num : num, den);
}

// Minimal experiment-config reader: one `key = value` per line, '#' comments,
// dotted keys for nesting, `[a, b, c]` arrays and `lo:hi:step` grids. Typed
// getters mark keys consumed; reject_unknown() then fails fast on leftovers,
// so typos in experiment definitions never pass silently.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, std::string source = "<config>") {
    ConfigFile cfg;
    cfg.source_ = std::move(source);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) +
                          ": empty key");
      if (cfg.entries_.count(key))
        throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) +
                          ": duplicate key '" + key + "'");
      cfg.entries_[key] = Entry{value, line_no};
    }
    return cfg;
  }

  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  static ConfigFile empty() {
    ConfigFile cfg;
    cfg.source_ = "<none>";
    return cfg;
  }

  const std::string& source() const { return source_; }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) {
    return require(key).value;
  }
  std::string get_string_or(const std::string& key, const std::string& dflt) {
    return has(key) ? get_string(key) : dflt;
  }

  std::int64_t get_int(const std::string& key) {
    const Entry& e = require(key);
    const Rational r = parse_checked(key, e);
    if (r.denominator() != 1)
      throw ConfigError(where(key, e) + ": expected an integer, got '" +
                        e.value + "'");
    return r.numerator();
  }
  std::int64_t get_int_or(const std::string& key, std::int64_t dflt) {
    return has(key) ? get_int(key) : dflt;
  }

  std::uint64_t get_u64(const std::string& key) {
    const Entry& e = require(key);
    try {
      return std::stoull(e.value);
    } catch (const std::exception&) {
      throw ConfigError(where(key, e) + ": expected an unsigned integer, got '" +
                        e.value + "'");
    }
  }
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t dflt) {
    return has(key) ? get_u64(key) : dflt;
  }

  double get_double(const std::string& key) {
    const Entry& e = require(key);
    return to_double(parse_checked(key, e));
  }
  double get_double_or(const std::string& key, double dflt) {
    return has(key) ? get_double(key) : dflt;
  }

  Rational get_rational(const std::string& key) {
    const Entry& e = require(key);
    return parse_checked(key, e);
  }
  Rational get_rational_or(const std::string& key, const Rational& dflt) {
    return has(key) ? get_rational(key) : dflt;
  }

  bool get_bool(const std::string& key) {
    const Entry& e = require(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    throw ConfigError(where(key, e) + ": expected true or false, got '" +
                      e.value + "'");
  }
  bool get_bool_or(const std::string& key, bool dflt) {
    return has(key) ? get_bool(key) : dflt;
  }

  // `[v, v, ...]` only.
  std::vector<std::string> get_string_list(const std::string& key) {
    const Entry& e = require(key);
    return split_list(key, e);
  }

  std::vector<std::int64_t> get_int_list(const std::string& key) {
    const Entry& e = require(key);
    std::vector<std::int64_t> out;
    for (const std::string& item : split_list(key, e)) {
      Rational r;
      try {
        r = parse_rational(item);
      } catch (const ConfigError& err) {
        throw ConfigError(where(key, e) + ": " + err.what());
      }
      if (r.denominator() != 1)
        throw ConfigError(where(key, e) + ": expected integers, got '" + item +
                          "'");
      out.push_back(r.numerator());
    }
    return out;
  }

  // `[v, ...]` or `lo:hi:step` (inclusive of hi when it lands on the grid);
  // expansion is exact-rational, so decimal steps do not drift.
  std::vector<Rational> get_rational_grid(const std::string& key) {
    const Entry& e = require(key);
    if (!e.value.empty() && e.value.front() == '[') {
      std::vector<Rational> out;
      for (const std::string& item : split_list(key, e)) {
        try {
          out.push_back(parse_rational(item));
        } catch (const ConfigError& err) {
          throw ConfigError(where(key, e) + ": " + err.what());
        }
      }
      return out;
    }
    const auto c1 = e.value.find(':');
    const auto c2 = e.value.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
      throw ConfigError(where(key, e) +
                        ": expected '[v, ...]' or 'lo:hi:step', got '" +
                        e.value + "'");
    Rational lo, hi, step;
    try {
      lo = parse_rational(trim(e.value.substr(0, c1)));
      hi = parse_rational(trim(e.value.substr(c1 + 1, c2 - c1 - 1)));
      step = parse_rational(trim(e.value.substr(c2 + 1)));
    } catch (const ConfigError& err) {
      throw ConfigError(where(key, e) + ": " + err.what());
    }
    if (step <= 0) throw ConfigError(where(key, e) + ": step must be > 0");
    if (hi < lo) throw ConfigError(where(key, e) + ": grid upper end below lower");
    std::vector<Rational> out;
    for (Rational v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }

  std::vector<double> get_double_grid(const std::string& key) {
    std::vector<double> out;
    for (const Rational& r : get_rational_grid(key)) out.push_back(to_double(r));
    return out;
  }

  // Fails when any key was never consumed by a typed getter.
  void reject_unknown() const {
    std::string bad;
    for (const auto& [key, entry] : entries_) {
      if (consumed_.count(key)) continue;
      if (!bad.empty()) bad += ", ";
      bad += "'" + key + "' (line " + std::to_string(entry.line) + ")";
    }
    if (!bad.empty())
      throw ConfigError(source_ + ": unknown key(s): " + bad);
  }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }

  const Entry& require(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end())
      throw ConfigError(source_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
  }

  std::string where(const std::string& key, const Entry& e) const {
    return source_ + ":" + std::to_string(e.line) + ": key '" + key + "'";
  }

  Rational parse_checked(const std::string& key, const Entry& e) const {
    try {
      return parse_rational(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(where(key, e) + ": " + err.what());
    }
  }

  std::vector<std::string> split_list(const std::string& key, const Entry& e) const {
    const std::string& v = e.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
      throw ConfigError(where(key, e) + ": expected '[v, v, ...]', got '" + v + "'");
    std::vector<std::string> items;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty())
        throw ConfigError(where(key, e) + ": empty list element");
      items.push_back(t);
    }
    return items;
  }

  std::string source_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> consumed_;
};

}  // namespace fdsched
