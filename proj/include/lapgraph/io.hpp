#pragma once

// CSV ingestion and result files. Matrices are written headerless with 17
// significant digits so they read back bit-exactly.

#include <cerrno>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lapgraph/error.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/matrix_core.hpp"

namespace lapgraph::io {

struct SampleTable {
  Matrix data;
  std::vector<std::string> names;  // empty without a header row
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size() && errno != ERANGE;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace detail

/// Parses comma-separated numbers, rows = observations. A first row containing
/// any non-numeric cell is taken as a header. Blank lines are skipped.
inline SampleTable parse_samples(std::istream& in, const std::string& source = "<input>") {
  SampleTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_row(line);
    if (first) {
      first = false;
      width = cells.size();
      bool numeric = true;
      double dummy;
      for (const std::string& c : cells) numeric = numeric && detail::parse_double(c, dummy);
      if (!numeric) {
        table.names = cells;
        continue;
      }
    }
    if (cells.size() != width) {
      throw ParseError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!detail::parse_double(cells[c], row[c])) {
        throw ParseError(source + ": non-numeric cell '" + cells[c] + "' at line " + std::to_string(line_no) +
                         ", column " + std::to_string(c + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source + ": no data rows");
  table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return table;
}

inline SampleTable read_samples(const std::filesystem::path& path) {
  std::ifstream in = detail::open_in(path);
  return parse_samples(in, path.string());
}

inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << detail::format_double(m(i, j));
    }
    os << '\n';
  }
}

inline void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out = detail::open_out(path);
  write_matrix_csv(out, m);
}

inline Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = detail::open_in(path);
  SampleTable t = parse_samples(in, path.string());
  if (!t.names.empty()) throw ParseError(path.string() + ": matrix files have no header");
  return t.data;
}

/// "i,j,weight" with 1-based indices in ascending (i, j) order.
inline void write_edges_csv(std::ostream& os, const EdgeSet& edges, const Matrix& weights) {
  os << "i,j,weight\n";
  for (const Edge& e : edges) {
    os << e.i + 1 << ',' << e.j + 1 << ','
       << detail::format_double(weights(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j))) << '\n';
  }
}

inline void write_edges_csv(const std::filesystem::path& path, const EdgeSet& edges, const Matrix& weights) {
  std::ofstream out = detail::open_out(path);
  write_edges_csv(out, edges, weights);
}

inline EdgeSet read_edges_csv(const std::filesystem::path& path, std::size_t p) {
  std::ifstream in = detail::open_in(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = detail::split_row(line);
    if (line_no == 1 && !cells.empty() && cells[0] == "i") continue;
    double a = 0.0;
    double b = 0.0;
    if (cells.size() < 2 || !detail::parse_double(cells[0], a) || !detail::parse_double(cells[1], b) || a < 1 ||
        b < 1) {
      throw ParseError(path.string() + ": bad edge at line " + std::to_string(line_no));
    }
    edges.push_back({static_cast<std::size_t>(a) - 1, static_cast<std::size_t>(b) - 1});
  }
  return EdgeSet(p, std::move(edges));
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = detail::open_out(path);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in = detail::open_in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace lapgraph::io
