#pragma once

#include <string>
#include <vector>

namespace sbic {

/// Numeric table read from a comma- or whitespace-separated text file. The
/// first line is treated as a header when any of its fields is not a number.
struct NumericTable {
  std::vector<std::string> columns;         // empty when the file has no header
  std::vector<std::vector<double>> rows;

  std::size_t column_count() const;
};

NumericTable read_numeric_table(const std::string& path);
NumericTable parse_numeric_table(const std::string& text);

/// Every number in the file, in reading order, ignoring a non-numeric header.
std::vector<double> read_real_list(const std::string& path);

}  // namespace sbic
