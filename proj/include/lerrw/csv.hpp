#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lerrw::csv {

/// Shortest text that round-trips a double, capped at 17 significant digits
/// ("%.17g"); non-finite values are written as nan, inf, -inf.
std::string format_double(double value);

std::vector<std::string> split_line(std::string_view line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ConfigError when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Comma-separated, first line is the header; blank lines are skipped.
Table read(std::istream& is);

double parse_double(const std::string& field);
long long parse_int(const std::string& field);

}  // namespace lerrw::csv
