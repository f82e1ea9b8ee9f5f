#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fakenews::csv {

/// One parsed record plus the 1-based physical line it started on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// Parses RFC-4180 text: comma separators, double-quote quoting with ""
/// escapes, CRLF or LF record ends, embedded newlines inside quotes.
/// Blank physical lines between records are skipped. A leading UTF-8 BOM is
/// ignored. Throws DataError on an unterminated quote or stray quote.
std::vector<Record> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins fields into one CSV line (without terminator).
std::string format_row(const std::vector<std::string>& fields);

}  // namespace fakenews::csv
