#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <variant>
#include <vector>

#include "spsnmf/similarity.hpp"

namespace spsnmf {

// Label column by header name or by (possibly negative) position.
struct LabelSelector {
  std::variant<std::string, long> column = -1L;

  // Integers (including "-1") select by position, anything else by name.
  static LabelSelector parse(const std::string& text);
};

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line where the record starts
};

// RFC-4180 records: quoted fields, "" escapes, embedded newlines, CRLF or LF.
// Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::istream& in);

// Numeric features with the label column removed; labels canonicalized to
// 0..C-1 in first-appearance order. A first row with a non-numeric feature
// cell (or any row when selecting by name) is treated as the header.
LabeledDataset load_csv_dataset(const std::filesystem::path& path, const LabelSelector& selector);
LabeledDataset parse_csv_dataset(std::istream& in, const LabelSelector& selector, std::string name);

}  // namespace spsnmf
