#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace parksim {

// %.17g, round-trips exactly through strtod
std::string fmt_double(double value);

double parse_double(const std::string& text);
long long parse_int(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // column index by header name, throws if absent
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

void write_csv_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace parksim
