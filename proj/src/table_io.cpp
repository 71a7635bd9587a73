#include "sbic/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sbic/errors.hpp"

namespace sbic {
namespace {

std::vector<std::string> split_fields(std::string line) {
  for (char& ch : line) {
    if (ch == ',' || ch == '\t' || ch == ';' || ch == '\r') ch = ' ';
  }
  std::istringstream in(line);
  std::vector<std::string> fields;
  for (std::string f; in >> f;) fields.push_back(std::move(f));
  return fields;
}

bool parse_double(const std::string& field, double& value) {
  std::string s = field;
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::size_t NumericTable::column_count() const {
  if (!columns.empty()) return columns.size();
  return rows.empty() ? 0 : rows.front().size();
}

NumericTable parse_numeric_table(const std::string& text) {
  NumericTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_double(fields[k], row[k]);
    if (!numeric) {
      if (!first) throw IoError("non-numeric field on line " + std::to_string(line_no));
      for (const auto& f : fields) table.columns.push_back(unquote(f));
    } else {
      const std::size_t width = table.column_count();
      if (width != 0 && row.size() != width) {
        throw IoError("line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(width));
      }
      table.rows.push_back(std::move(row));
    }
    first = false;
  }
  return table;
}

NumericTable read_numeric_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_numeric_table(buffer.str());
}

std::vector<double> read_real_list(const std::string& path) {
  const NumericTable table = read_numeric_table(path);
  std::vector<double> out;
  for (const auto& row : table.rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace sbic
