#ifndef PENNING_CLI_TABLE_HPP
#define PENNING_CLI_TABLE_HPP

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "json.hpp"
#include "penning/errors.hpp"

namespace penning::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* version = "0.1.0";
inline constexpr int significant_digits = 9;

/// Locale-independent shortest form with at most 9 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant_digits);
  if (res.ec != std::errc()) throw Error("float formatting failed");
  return {buf, res.ptr};
}

/// v rounded to 9 significant digits, so JSON output carries the same digits as CSV.
inline double round_significant(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  const std::string s = format_double(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

/// Rounds every floating-point leaf of a JSON value.
inline json rounded(const json& j) {
  if (j.is_number_float()) return round_significant(j.get<double>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
    return out;
  }
  return j;
}

using Cell = std::variant<double, std::string>;

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json meta = json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw Error("row width does not match column count");
    rows.push_back(std::move(row));
  }
};

namespace detail {

inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  if (j.is_number_float()) {
    out.emplace_back(prefix, format_double(j.get<double>()));
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

inline std::string csv_field(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace detail

/// `# key = value` metadata lines (dotted paths), then header and rows.
inline void write_csv(std::ostream& os, const SweepTable& t) {
  std::vector<std::pair<std::string, std::string>> lines;
  detail::flatten(t.meta, "", lines);
  for (const auto& [k, v] : lines) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << detail::csv_field(r[i]);
    os << "\n";
  }
}

/// {"meta": ..., "columns": [...], "rows": [{column: value}, ...]}; NaN becomes null.
inline json to_json(const SweepTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (const double* d = std::get_if<double>(&r[i])) {
        row[t.columns[i]] = std::isfinite(*d) ? json(round_significant(*d)) : json(nullptr);
      } else {
        row[t.columns[i]] = std::get<std::string>(r[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  return json{{"meta", rounded(t.meta)}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

inline void write_json(std::ostream& os, const SweepTable& t) { os << to_json(t).dump(2) << "\n"; }

inline void write_table(std::ostream& os, const SweepTable& t, const std::string& format) {
  if (format == "json") {
    write_json(os, t);
  } else {
    write_csv(os, t);
  }
}

/// Rebuilds the metadata object from CSV `#` lines.
inline json parse_csv_meta(std::istream& is) {
  json meta = json::object();
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(2, eq - 2);
    const std::string val = line.substr(eq + 3);
    json value;
    if (val == "NaN" || val == "inf" || val == "-inf") {
      value = val == "NaN" ? std::nan("") : (val == "inf" ? INFINITY : -INFINITY);
    } else {
      value = json::parse(val);
    }
    json* node = &meta;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
  return meta;
}

}  // namespace penning::cli

#endif
