#include "spsnmf/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <unordered_map>

#include "spsnmf/errors.hpp"

namespace spsnmf {

LabelSelector LabelSelector::parse(const std::string& text) {
  if (!text.empty()) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (errno == 0 && end == text.c_str() + text.size()) return LabelSelector{v};
  }
  return LabelSelector{text};
}

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // current record has content
  std::size_t line = 1;
  row.line = 1;

  const auto end_record = [&] {
    if (field_started || !row.fields.empty()) {
      row.fields.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row = CsvRow{};
    field.clear();
    field_started = false;
  };

  char ch;
  while (in.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        row.line = line;
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", line, row.fields.size() + 1);
  end_record();
  return rows;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

LabeledDataset parse_csv_dataset(std::istream& in, const LabelSelector& selector, std::string name) {
  const std::vector<CsvRow> rows = parse_csv(in);
  if (rows.empty()) throw ParseError("empty dataset", 1, 1);
  const std::size_t width = rows.front().fields.size();
  if (width < 2) throw ParseError("need at least one feature column and a label column", rows.front().line, 1);

  bool has_header = false;
  std::size_t label_col = 0;
  if (const auto* label_name = std::get_if<std::string>(&selector.column)) {
    has_header = true;
    bool found = false;
    for (std::size_t j = 0; j < width; ++j) {
      if (trim(rows.front().fields[j]) == *label_name) {
        label_col = j;
        found = true;
        break;
      }
    }
    if (!found) throw MissingLabelColumn("no column named '" + *label_name + "'");
  } else {
    const long idx = std::get<long>(selector.column);
    const long resolved = idx < 0 ? static_cast<long>(width) + idx : idx;
    if (resolved < 0 || resolved >= static_cast<long>(width)) {
      throw MissingLabelColumn("label column index " + std::to_string(idx) + " out of range for " +
                               std::to_string(width) + " columns");
    }
    label_col = static_cast<std::size_t>(resolved);
    for (std::size_t j = 0; j < width; ++j) {
      if (j != label_col && !parse_number(rows.front().fields[j])) {
        has_header = true;
        break;
      }
    }
  }

  const std::size_t first = has_header ? 1 : 0;
  const std::size_t n = rows.size() - first;
  if (n < 2) throw ParseError("need at least two samples", rows.back().line, 1);
  const std::size_t d = width - 1;

  LabeledDataset ds;
  ds.name = std::move(name);
  std::vector<double> entries;
  entries.reserve(n * d);
  std::unordered_map<std::string, int> class_ids;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != width) {
      throw ParseError("row has " + std::to_string(row.fields.size()) + " fields, expected " +
                           std::to_string(width) + " (line " + std::to_string(row.line) + ")",
                       row.line, row.fields.size());
    }
    for (std::size_t j = 0; j < width; ++j) {
      if (j == label_col) continue;
      const auto v = parse_number(row.fields[j]);
      if (!v) {
        throw ParseError("non-numeric feature '" + row.fields[j] + "' at line " + std::to_string(row.line) +
                             ", column " + std::to_string(j + 1),
                         row.line, j + 1);
      }
      entries.push_back(*v);
    }
    const std::string label = trim(row.fields[label_col]);
    auto [it, inserted] = class_ids.emplace(label, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(label);
    ds.labels.push_back(it->second);
  }
  ds.features = DenseMatrix(n, d, std::move(entries));
  return ds;
}

LabeledDataset load_csv_dataset(const std::filesystem::path& path, const LabelSelector& selector) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return parse_csv_dataset(in, selector, path.stem().string());
}

}  // namespace spsnmf
