#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ptauction::io {

// Minimal comma-separated reader: no quoting, surrounding whitespace and a
// trailing '\r' are trimmed, blank lines are skipped.
class CsvReader {
 public:
  // Reads the header line and checks it equals `expected_header` column for
  // column. Throws std::runtime_error otherwise.
  CsvReader(std::istream& in, std::vector<std::string> expected_header);

  // Next data row; false at end of input. Throws when the column count is
  // wrong. `row_number()` is 1-based over data rows.
  bool next(std::vector<std::string>& fields);
  std::size_t row_number() const { return row_; }
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t columns_;
  std::size_t row_ = 0;
  std::size_t line_ = 1;
};

std::vector<std::string> split_csv_line(std::string_view line);

// Locale-independent fixed-point rendering; "inf" / "-inf" / "nan" for
// non-finite values.
std::string fixed(double value, int digits = 6);

}  // namespace ptauction::io
