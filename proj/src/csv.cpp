#include "orlisov/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orlisov/errors.hpp"

namespace orlisov::csv {

std::string format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = line.find(',', begin);
    std::string field = line.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    const std::size_t start = field.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string{} : field.substr(start));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

}  // namespace

Table read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw ConfigError(path + ": ragged row '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

double parse_double(const std::string& field) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
    throw ConfigError("not a number: '" + field + "'");
  }
  return v;
}

}  // namespace orlisov::csv
