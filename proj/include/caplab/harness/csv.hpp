#pragma once

#include <string>
#include <vector>

namespace caplab {

/// Shortest text that round-trips the double ("%.17g"); "inf", "-inf", "nan".
std::string format_double(double v);

/// Comma-separated table with a header row and '\n' line endings. Fields
/// containing commas or quotes are quoted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& fields);
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  void append(const std::vector<std::string>& fields);

  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index; throws ValidationError naming the missing column.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

}  // namespace caplab
