#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "adlab/errors.hpp"

namespace adlab {

// Shortest text form that parses back to the identical double: 17 significant
// digits round-trip for IEEE binary64.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated, '.' decimal, LF line endings, UTF-8, header mandatory.
// Cells are pre-rendered strings so numeric formatting stays in one place.
inline std::string render_csv(const CsvTable& t) {
  require_pre(!t.header.empty(), "csv: header row is mandatory");
  std::string out;
  const auto append_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(t.header);
  for (const std::vector<std::string>& r : t.rows) {
    require_pre(r.size() == t.header.size(), "csv: row width must match header");
    append_row(r);
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  require_num(f.good(), "io: cannot open " + path.string() + " for writing");
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  f.close();
  require_num(f.good(), "io: short write to " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require_config(f.good(), "io: cannot open " + path.string());
  std::string body((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return body;
}

inline CsvTable parse_csv(const std::string& body) {
  CsvTable t;
  std::vector<std::string> row;
  std::string cell;
  bool any = false;
  for (char c : body) {
    if (c == ',') {
      row.push_back(cell);
      cell.clear();
    } else if (c == '\n') {
      row.push_back(cell);
      cell.clear();
      if (!any) {
        t.header = row;
        any = true;
      } else {
        t.rows.push_back(row);
      }
      row.clear();
    } else {
      cell += c;
    }
  }
  require_config(any && cell.empty() && row.empty(),
                 "csv: malformed body (missing header or trailing newline)");
  return t;
}

}  // namespace adlab
