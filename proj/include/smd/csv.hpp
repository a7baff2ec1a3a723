#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace smd {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader: comma delimiter, double-quote quoting with "" escapes,
/// CRLF or LF line ends. Blank lines are skipped.
std::vector<CsvRow> parse_csv(std::istream& in);

/// Quotes the field only if it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const CsvRow& row);

/// Strict decimal parse of a whole (trimmed) field; nullopt unless finite.
std::optional<double> parse_double(const std::string& field);

class IngestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DataSeries {
  std::vector<double> values;
  std::string label;
  std::string source;

  double min() const;
  double max() const;
};

/// Reads one numeric column. A first row with any non-numeric field is a
/// header. `column` is a header name or a 1-based index; empty selects the
/// first column. Throws IngestError naming the offending line.
DataSeries ingest_csv(const std::string& path, const std::string& column = "");
DataSeries ingest_csv(std::istream& in, const std::string& source, const std::string& column = "");

}  // namespace smd
