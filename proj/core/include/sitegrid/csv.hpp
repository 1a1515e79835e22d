#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sitegrid::csv {

/// In-memory CSV document: one header record plus data records.
/// All records are guaranteed to have the same field count as the header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Parse RFC-4180 text (quoted fields, doubled quotes, CRLF or LF record
/// separators, optional UTF-8 BOM). Throws Error{malformed_csv} on
/// structural problems such as ragged rows or an unterminated quote, and
/// Error{empty_file} when the input holds no header record at all.
Table parse(std::string_view text, std::string_view origin = "<string>");

/// Read and parse a CSV file. Throws Error{missing_file} if absent.
Table read_file(const std::filesystem::path& path);

/// Quote a field if it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

/// Serialize with CRLF record separators per RFC 4180.
std::string to_string(const Table& table);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);
std::string format_int(std::int64_t value);

/// Strict full-string numeric parse; rejects non-finite values and
/// surrounding garbage. Leading/trailing ASCII whitespace is tolerated.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

}  // namespace sitegrid::csv
