#include "chiral/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "chiral/error.hpp"

namespace chiral::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ParameterError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool Table::has_column(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& t) {
  for (const auto& [k, v] : t.metadata) out << "# " << k << '=' << v << '\n';
  for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  long lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ParseError("metadata line without '='", lineno);
      t.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    auto cells = split(line);
    if (!header) {
      for (const auto& c : cells)
        if (c.empty()) throw ParseError("empty column name", lineno);
      t.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size())
      throw ParseError("expected " + std::to_string(t.columns.size()) + " fields, got " + std::to_string(cells.size()),
                       lineno);
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (!parse_double(cells[j], row[j])) throw ParseError("not a number: '" + cells[j] + "'", lineno);
    t.rows.push_back(std::move(row));
  }
  if (!header) throw ParseError("missing header line", lineno + 1);
  return t;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json meta = nlohmann::json::array();
  for (const auto& [k, v] : t.metadata) meta.push_back({k, v});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : r) {
      if (std::isfinite(v)) {
        row.push_back(v);
      } else {
        row.push_back(format_double(v));
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"schema", kSchemaVersion}, {"metadata", meta}, {"columns", t.columns}, {"rows", rows}};
}

Table from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<int>() != kSchemaVersion) throw ParseError("unsupported schema version", 0);
    Table t;
    for (const auto& kv : j.at("metadata")) t.metadata.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    long index = 0;
    for (const auto& r : j.at("rows")) {
      ++index;
      if (r.size() != t.columns.size()) throw ParseError("row has the wrong number of fields", index);
      std::vector<double> row;
      for (const auto& v : r) {
        double d;
        if (v.is_number()) {
          d = v.get<double>();
        } else if (v.is_string() && parse_double(v.get<std::string>(), d)) {
        } else {
          throw ParseError("non-numeric entry", index);
        }
        row.push_back(d);
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed table JSON: ") + e.what(), 0);
  }
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  if (ends_with(path, ".json")) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    return from_json(j);
  }
  return read_csv(in);
}

void write_file(const std::string& path, const Table& t, const std::string& format) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw Error("cannot write '" + path + "'");
    out = &file;
  }
  if (format == "json") {
    *out << to_json(t).dump(1) << '\n';
  } else if (format == "csv") {
    write_csv(*out, t);
  } else {
    throw ParameterError("unknown format '" + format + "'");
  }
  if (!*out) throw Error("write failed for '" + path + "'");
}

Histogram histogram(const std::vector<double>& values, int bins) {
  if (values.empty()) throw ParameterError("histogram: no values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double a = *lo, b = *hi;
  if (a == b) {
    a -= 0.5;
    b += 0.5;
  }
  return histogram(values, bins, a, b);
}

Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw ParameterError("histogram: need bins >= 1 and lo < hi");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) h.edges[k] = lo + (hi - lo) * k / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto k = static_cast<long>((v - lo) / (hi - lo) * bins);
    k = std::clamp<long>(k, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(k)];
  }
  return h;
}

nlohmann::json to_json(const Histogram& h) {
  return {{"schema", kSchemaVersion}, {"edges", h.edges}, {"counts", h.counts}};
}

std::vector<HexCell> hexbin(const std::vector<double>& x, const std::vector<double>& y, int gridsize) {
  if (x.size() != y.size() || x.empty()) throw ParameterError("hexbin: x and y must be nonempty and equal length");
  if (gridsize < 1) throw ParameterError("hexbin: gridsize must be >= 1");
  const auto [xl, xh] = std::minmax_element(x.begin(), x.end());
  const auto [yl, yh] = std::minmax_element(y.begin(), y.end());
  const double xmin = *xl, ymin = *yl;
  double sx = (*xh - xmin) / gridsize;
  if (!(sx > 0.0)) sx = std::max(1.0, *yh - ymin) / gridsize;
  const double sy = std::sqrt(3.0) * sx;

  // Two offset rectangular lattices; each point joins the nearer center.
  std::map<std::tuple<long, long, int>, long> cells;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double ix = (x[k] - xmin) / sx, iy = (y[k] - ymin) / sy;
    const long i1 = std::lround(ix), j1 = std::lround(iy);
    const long i2 = static_cast<long>(std::floor(ix)), j2 = static_cast<long>(std::floor(iy));
    const double d1 = (ix - i1) * (ix - i1) + 3.0 * (iy - j1) * (iy - j1);
    const double d2 = (ix - i2 - 0.5) * (ix - i2 - 0.5) + 3.0 * (iy - j2 - 0.5) * (iy - j2 - 0.5);
    if (d1 <= d2) {
      ++cells[{2 * j1, i1, 0}];
    } else {
      ++cells[{2 * j2 + 1, i2, 1}];
    }
  }
  std::vector<HexCell> out;
  out.reserve(cells.size());
  for (const auto& [key, count] : cells) {
    const auto [row, col, lattice] = key;
    const double cx = xmin + (static_cast<double>(col) + 0.5 * lattice) * sx;
    const double cy = ymin + 0.5 * static_cast<double>(row) * sy;
    out.push_back({cx, cy, count});
  }
  return out;
}

}  // namespace chiral::io
