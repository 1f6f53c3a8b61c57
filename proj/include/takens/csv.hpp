#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace takens {

// Shortest decimal form that round-trips to the same double. NaN prints as
// "nan", infinities as "inf"/"-inf".
std::string format_double(double value);

// One CSV row builder. Fields are appended left to right and emitted with
// comma separators and a trailing '\n'. No quoting: callers only pass
// numbers, flags, and fixed identifiers.
class CsvRow {
 public:
  CsvRow& add(std::string_view field);
  CsvRow& add(double value);
  CsvRow& add(long long value);
  CsvRow& add(int value);
  CsvRow& add_flag(bool value);  // 1 or 0

  void write(std::ostream& out) const;

 private:
  std::vector<std::string> fields_;
};

void write_csv_header(std::ostream& out, std::string_view header);

}  // namespace takens
