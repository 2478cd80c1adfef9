#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace chiral::io {

inline constexpr int kSchemaVersion = 1;

// Numeric table with ordered key/value metadata.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a named column; throws ParameterError when absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

// 17 significant digits: round-trips every double.
std::string format_double(double v);

/// `# key=value` metadata lines, one header line, then comma-separated rows.
void write_csv(std::ostream& out, const Table& t);
/// Throws ParseError carrying the 1-based line number of the first bad line.
Table read_csv(std::istream& in);

nlohmann::json to_json(const Table& t);
Table from_json(const nlohmann::json& j);

Table read_file(const std::string& path);   // by extension: .json or CSV
void write_file(const std::string& path, const Table& t, const std::string& format);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<long> counts;
};

// Equal-width bins over [lo, hi]; the defaults use the sample range.
Histogram histogram(const std::vector<double>& values, int bins);
Histogram histogram(const std::vector<double>& values, int bins, double lo, double hi);
nlohmann::json to_json(const Histogram& h);

struct HexCell {
  double x = 0.0;
  double y = 0.0;
  long count = 0;
};

/// Hexagonal binning with `gridsize` hexagons across the x range; only
/// nonempty cells are returned, ordered by (row, column).
std::vector<HexCell> hexbin(const std::vector<double>& x, const std::vector<double>& y, int gridsize);

}  // namespace chiral::io
