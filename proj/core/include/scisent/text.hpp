#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace scisent {

std::string_view trim(std::string_view s) noexcept;

// Trims and folds every run of ASCII whitespace into a single space.
std::string collapse_whitespace(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);

// Decodes UTF-8 into Unicode scalar values. Bytes that do not form a valid
// sequence decode one by one to values above U+10FFFF so they still compare
// consistently.
std::u32string decode_utf8(std::string_view s);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) noexcept;

// Replaces every occurrence of `placeholder`; single pass, so text introduced by
// `value` is never rescanned.
std::string replace_all(std::string_view text, std::string_view placeholder,
                        std::string_view value);

// RFC 3339 UTC, second resolution: 2024-05-01T12:00:00Z
std::string format_utc(std::chrono::system_clock::time_point tp);

std::string read_file(const std::string& path);

// Write to a sibling temporary file and rename over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace scisent
