#include "ptauction/io.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ptauction::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string_view cell =
        comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
    out.emplace_back(trim(cell));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

CsvReader::CsvReader(std::istream& in, std::vector<std::string> expected_header)
    : in_(in), columns_(expected_header.size()) {
  std::string line;
  while (std::getline(in_, line)) {
    if (!trim(line).empty()) break;
    ++line_;
    line.clear();
  }
  if (trim(line).empty()) throw std::runtime_error("empty CSV input: header row required");
  // Tolerate a UTF-8 byte-order mark.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv_line(line);
  if (header != expected_header) {
    std::string want;
    for (std::size_t i = 0; i < expected_header.size(); ++i) {
      if (i) want += ',';
      want += expected_header[i];
    }
    throw std::runtime_error("unexpected CSV header '" + line + "', expected '" + want + "'");
  }
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    ++row_;
    fields = split_csv_line(line);
    if (fields.size() != columns_) {
      throw std::runtime_error("row " + std::to_string(row_) + " (line " + std::to_string(line_) +
                               "): expected " + std::to_string(columns_) + " columns, got " +
                               std::to_string(fields.size()));
    }
    return true;
  }
  return false;
}

std::string fixed(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.{}f}", value, digits);
}

}  // namespace ptauction::io
