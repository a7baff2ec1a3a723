#include "smd/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace smd {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char c = 0;

  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };

  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw IngestError("unterminated quoted field");
  end_row();
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(row[i]);
  }
  out << '\n';
}

std::optional<double> parse_double(const std::string& field) {
  const std::string s = trim(field);
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double DataSeries::min() const { return *std::min_element(values.begin(), values.end()); }
double DataSeries::max() const { return *std::max_element(values.begin(), values.end()); }

DataSeries ingest_csv(std::istream& in, const std::string& source, const std::string& column) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw IngestError(source + ": no rows");

  const bool header = std::any_of(rows.front().begin(), rows.front().end(),
                                  [](const std::string& f) { return !parse_double(f).has_value(); });
  std::size_t index = 0;
  std::string label;
  if (column.empty()) {
    label = header ? trim(rows.front().front()) : "column 1";
  } else if (all_digits(column)) {
    index = std::stoul(column);
    if (index == 0) throw IngestError(source + ": column index is 1-based");
    --index;
    label = header && index < rows.front().size() ? trim(rows.front()[index]) : "column " + column;
  } else {
    if (!header) throw IngestError(source + ": no header row to select column '" + column + "'");
    const auto& names = rows.front();
    const auto it = std::find_if(names.begin(), names.end(),
                                 [&](const std::string& f) { return trim(f) == column; });
    if (it == names.end()) throw IngestError(source + ": no column named '" + column + "'");
    index = static_cast<std::size_t>(it - names.begin());
    label = column;
  }

  DataSeries series{{}, label, source};
  for (std::size_t r = header ? 1 : 0; r < rows.size(); ++r) {
    const auto line = std::to_string(r + 1);
    if (index >= rows[r].size()) throw IngestError(source + ": row " + line + " has no column " + std::to_string(index + 1));
    const auto v = parse_double(rows[r][index]);
    if (!v) throw IngestError(source + ": row " + line + ": not a finite number: '" + rows[r][index] + "'");
    series.values.push_back(*v);
  }
  if (series.values.empty()) throw IngestError(source + ": selected column is empty");
  return series;
}

DataSeries ingest_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path);
  return ingest_csv(in, path, column);
}

}  // namespace smd
