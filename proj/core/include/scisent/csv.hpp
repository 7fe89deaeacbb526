#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace scisent::csv {

struct Row {
  std::size_t line_number = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180: quoted fields may contain commas, doubled quotes and line breaks.
// Accepts LF or CRLF record separators. Throws MalformedRecord on an
// unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace scisent::csv
