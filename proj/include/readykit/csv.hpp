#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "readykit/types.hpp"

namespace readykit::csv {

struct Table {
  std::map<std::string, std::string> directives;  // leading "# key: value" lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

/// Reads a CSV file with optional leading `# key: value` directive lines and a
/// mandatory header row. Blank lines are skipped.
inline Table read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  Table t;
  std::string line;
  bool headerSeen = false;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      std::string body = trim(s.substr(1));
      size_t colon = body.find(':');
      if (colon != std::string::npos)
        t.directives[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      continue;
    }
    if (!headerSeen) {
      t.header = splitLine(s);
      headerSeen = true;
    } else {
      t.rows.push_back(splitLine(s));
    }
  }
  if (!headerSeen) throw ValidationError("missing header row: " + path);
  return t;
}

inline int column(const Table& t, const std::string& name) {
  for (int i = 0; i < static_cast<int>(t.header.size()); ++i)
    if (t.header[i] == name) return i;
  throw ValidationError("malformed header: missing column '" + name + "'");
}

inline double toDouble(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("not a number in " + context + ": '" + s + "'");
  }
}

inline long long toInteger(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("not an integer in " + context + ": '" + s + "'");
  }
}

/// Full-precision formatting for data files; round-trips doubles exactly.
inline std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One-decimal formatting for presentation tables (percent cells).
inline std::string pct1(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

/// Two-decimal formatting (0-10 index scores).
inline std::string dec2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path) {
    if (!out_) throw ValidationError("cannot write file: " + path);
  }
  void directive(const std::string& key, const std::string& value) {
    out_ << "# " << key << ": " << value << "\n";
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ",";
      out_ << fields[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace readykit::csv
