#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ft {

// Minimal RFC-4180 reader: quoted fields, embedded commas/quotes/newlines.
// Rows are returned without the trailing newline; a final unterminated row is
// still yielded.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns nullopt at end of input. `row_number` is 1-based over records.
  std::optional<std::vector<std::string>> next();
  std::size_t row_number() const { return row_; }

 private:
  std::istream& in_;
  std::size_t row_ = 0;
};

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace ft
