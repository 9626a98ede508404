#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oilsent {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC-4180 reader. Quoted fields may contain separators, doubled quotes and
/// line breaks. Blank lines and lines starting with `#` (outside quotes) are
/// skipped, which is how run metadata rides along in output files.
class CsvReader {
public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(CsvRow& row);

private:
  std::istream& in_;
  std::size_t line_ = 0;
  bool first_ = true;
};

/// Reads the header row and checks it against `expected` (exact, in order).
/// Returns false on an empty stream. Throws ParseError on mismatch.
bool expect_header(CsvReader& reader, std::span<const std::string_view> expected,
                   std::string_view what);

std::string csv_field(std::string_view value);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv_row(std::ostream& out, std::initializer_list<std::string> fields);

/// Formats a double with enough digits to round-trip.
std::string format_double(double v);
double parse_double(std::string_view text, std::size_t line, std::string_view what);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace oilsent
