#pragma once

// Trace CSV: the header row from Trace::kHeader, one row per step, values in
// shortest round-trip decimal form, LF line endings.

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pitchap/errors.hpp"
#include "pitchap/sim_engine.hpp"

namespace pitchap {

inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline std::string format_number(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

inline void write_trace_csv(std::ostream& os, const Trace& trace) {
  std::string line;
  os << Trace::kHeader << '\n';
  const auto cols = trace.columns();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    line.clear();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c > 0) line.push_back(',');
      append_number(line, (*cols[c])[i]);
    }
    line.push_back('\n');
    os << line;
  }
}

/// Reads a CSV written by write_trace_csv. Throws ConfigError naming the
/// offending line on malformed input.
inline Trace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty trace file", "line 1");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != Trace::kHeader) throw ConfigError("unexpected trace header", "line 1");

  Trace tr;
  auto cols = tr.columns();
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest = line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      const bool last = c + 1 == cols.size();
      if (res.ec != std::errc() || res.ptr != field.data() + field.size() ||
          (last != (comma == std::string_view::npos)))
        throw ConfigError("malformed trace row", "line " + std::to_string(lineno));
      cols[c]->push_back(v);
      if (!last) rest.remove_prefix(comma + 1);
    }
  }
  return tr;
}

}  // namespace pitchap
