#include "takens/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace takens {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

CsvRow& CsvRow::add(std::string_view field) {
  fields_.emplace_back(field);
  return *this;
}

CsvRow& CsvRow::add(double value) {
  fields_.push_back(format_double(value));
  return *this;
}

CsvRow& CsvRow::add(long long value) {
  fields_.push_back(std::to_string(value));
  return *this;
}

CsvRow& CsvRow::add(int value) {
  fields_.push_back(std::to_string(value));
  return *this;
}

CsvRow& CsvRow::add_flag(bool value) {
  fields_.push_back(value ? "1" : "0");
  return *this;
}

void CsvRow::write(std::ostream& out) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out << ',';
    out << fields_[i];
  }
  out << '\n';
}

void write_csv_header(std::ostream& out, std::string_view header) {
  out << header << '\n';
}

}  // namespace takens
