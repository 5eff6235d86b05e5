#pragma once
// Minimal RFC 4180 reader/writer helpers.

#include <string>
#include <string_view>
#include <vector>

namespace pctcoef::csv {

using Row = std::vector<std::string>;

/// Splits CSV text into rows of unquoted fields. Accepts LF or CRLF line
/// endings, quoted fields with embedded commas, newlines and doubled quotes.
/// A blank line yields a row with no fields; a trailing newline yields
/// nothing. Throws Error(input) on
/// an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string join(const Row& row);

}  // namespace pctcoef::csv
