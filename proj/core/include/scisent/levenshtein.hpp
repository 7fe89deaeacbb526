#pragma once

#include <cstddef>
#include <string_view>

namespace scisent {

// Edit distance over Unicode scalar values (UTF-8 input).
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

// Distance divided by the longer length: 0 for identical strings, 1 when no
// character survives. Two empty strings are at distance 0.
double normalized_levenshtein(std::string_view a, std::string_view b);

}  // namespace scisent
