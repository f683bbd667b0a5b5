#pragma once

#include <string>
#include <vector>

namespace orlisov::csv {

/// %.17g formatting; round-trips every finite double.
std::string format(double x);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated reader (no quoting). Throws ConfigError on I/O
/// failure or ragged rows.
Table read(const std::string& path);

double parse_double(const std::string& field);

}  // namespace orlisov::csv
