#pragma once

// File and line-oriented helpers shared by the format readers.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hlmkit/error.hpp"

namespace hlmkit {

using json = nlohmann::json;

namespace io {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  auto out = open_output(path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

/// Calls `fn(object, line_number)` for each non-blank line. Lines that are not
/// JSON objects raise ParseError carrying the 1-based line number.
inline void for_each_jsonl(std::istream& in,
                           const std::function<void(const json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json obj;
    try {
      obj = json::parse(strip_cr(line));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected a JSON object");
    }
    fn(obj, line_no);
  }
}

inline std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no); }

inline const json& require_field(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::ParseError, at_line(line_no) + ": missing field '" + key + "'");
  }
  return *it;
}

inline std::string require_string(const json& obj, const char* key, std::size_t line_no) {
  const auto& v = require_field(obj, key, line_no);
  if (!v.is_string()) {
    throw Error(ErrorCode::ParseError, at_line(line_no) + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline double require_number(const json& obj, const char* key, std::size_t line_no) {
  const auto& v = require_field(obj, key, line_no);
  if (!v.is_number()) {
    throw Error(ErrorCode::ParseError, at_line(line_no) + ": field '" + key + "' must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw Error(ErrorCode::ValidationError, at_line(line_no) + ": field '" + key + "' is not finite");
  }
  return d;
}

inline bool require_bool(const json& obj, const char* key, std::size_t line_no) {
  const auto& v = require_field(obj, key, line_no);
  if (!v.is_boolean()) {
    throw Error(ErrorCode::ParseError, at_line(line_no) + ": field '" + key + "' must be a boolean");
  }
  return v.get<bool>();
}

/// Minimal CSV splitter; fields may be double-quoted with "" escapes.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

inline std::string trim_ascii(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view text, std::size_t line_no, std::string_view what) {
  const std::string s = trim_ascii(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw Error(ErrorCode::ParseError,
                at_line(line_no) + ": " + std::string(what) + " '" + s + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::ValidationError,
                at_line(line_no) + ": " + std::string(what) + " is not finite");
  }
  return value;
}

inline bool parse_bool(std::string_view text, std::size_t line_no, std::string_view what) {
  const std::string s = trim_ascii(text);
  if (s == "true" || s == "1" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "0" || s == "False" || s == "FALSE") return false;
  throw Error(ErrorCode::ParseError,
              at_line(line_no) + ": " + std::string(what) + " '" + s + "' is not a boolean");
}

}  // namespace io
}  // namespace hlmkit
