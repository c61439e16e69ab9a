#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace weil::csv {

/// 17 significant digits; integral values keep a trailing ".0" and
/// non-finite values print as "inf", "-inf" or "nan".
std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(std::string_view field, std::size_t line_no);

/// A numeric table read from CSV. Blank lines and lines starting with '#'
/// are skipped; the first remaining line is the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws ParseError naming the offending line on ragged rows or bad numbers.
Table read_table(std::istream& is);

}  // namespace weil::csv
