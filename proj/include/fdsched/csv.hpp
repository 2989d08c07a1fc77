#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fdsched/analytics.hpp"

namespace fdsched {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Comma-separated output with a '#'-prefixed metadata block. Metadata lines
// use the same `key = value` syntax as config files, so the parameters that
// produced a table can be read back by ConfigFile. '.' decimals, header row,
// one fixed column set per emission.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> columns)
      : os_(os), columns_(std::move(columns)) {}

  CsvWriter& metadata(const std::string& key, const std::string& value) {
    if (header_written_)
      throw InvalidInputError("metadata must precede the header row");
    os_ << "# " << key << " = " << value << "\n";
    return *this;
  }
  CsvWriter& metadata(const std::string& key, const char* value) {
    return metadata(key, std::string(value));
  }
  CsvWriter& metadata(const std::string& key, std::int64_t value) {
    return metadata(key, std::to_string(value));
  }
  CsvWriter& metadata(const std::string& key, std::uint64_t value) {
    return metadata(key, std::to_string(value));
  }
  CsvWriter& metadata(const std::string& key, int value) {
    return metadata(key, std::to_string(value));
  }
  CsvWriter& metadata(const std::string& key, double value) {
    return metadata(key, format_double(value));
  }
  CsvWriter& metadata(const std::string& key, const Rational& value) {
    return metadata(key, to_string(value));
  }

  void row(const std::vector<std::string>& fields) {
    if (!header_written_) write_header();
    if (fields.size() != columns_.size())
      throw InvalidInputError("row has " + std::to_string(fields.size()) +
                              " fields, schema has " +
                              std::to_string(columns_.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << fields[i];
    }
    os_ << '\n';
  }

  // Convenience field formatters.
  static std::string field(const std::string& v) { return v; }
  static std::string field(const char* v) { return v; }
  static std::string field(double v) { return format_double(v); }
  static std::string field(std::int64_t v) { return std::to_string(v); }
  static std::string field(std::uint64_t v) { return std::to_string(v); }
  static std::string field(int v) { return std::to_string(v); }
  static std::string field(bool v) { return v ? "true" : "false"; }
  static std::string field(const Rational& v) { return to_string(v); }

  template <class... Args>
  void row_of(const Args&... args) {
    row(std::vector<std::string>{field(args)...});
  }

 private:
  void write_header() {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) os_ << ',';
      os_ << columns_[i];
    }
    os_ << '\n';
    header_written_ = true;
  }

  std::ostream& os_;
  std::vector<std::string> columns_;
  bool header_written_ = false;
};

// Schedules render as '|'-separated slot lists ("3|1|0|0") so they stay a
// single CSV field.
inline std::string schedule_to_string(const Schedule& f) {
  std::string out;
  for (std::size_t i = 0; i < f.slots.size(); ++i) {
    if (i) out += '|';
    out += std::to_string(f.slots[i]);
  }
  return out;
}

}  // namespace fdsched
