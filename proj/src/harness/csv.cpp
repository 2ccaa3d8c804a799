#include "caplab/harness/csv.hpp"

#include <cmath>
#include <cstdio>

#include "caplab/error.hpp"

namespace caplab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw ValidationError("CSV header must be nonempty");
  append(header);
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != width_)
    throw ValidationError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(width_));
  append(fields);
  ++rows_;
}

void CsvWriter::append(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_ += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      text_ += f;
    } else {
      text_ += '"';
      for (char c : f) {
        if (c == '"') text_ += '"';
        text_ += c;
      }
      text_ += '"';
    }
  }
  text_ += '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError("CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(field);
        records.push_back(row);
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(field);
    records.push_back(row);
  }
  if (records.empty()) throw ValidationError("CSV is empty");
  CsvTable t;
  t.header = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size())
      throw ValidationError("CSV line " + std::to_string(r + 1) + " has " +
                            std::to_string(records[r].size()) + " fields, header has " +
                            std::to_string(t.header.size()));
    t.rows.push_back(records[r]);
  }
  return t;
}

}  // namespace caplab
