#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace narrative::text {

/// Strips ASCII whitespace, NBSP and the ideographic space (U+3000).
std::string_view trim_space(std::string_view s);

/// Byte length of the UTF-8 sequence introduced by `lead` (1 for invalid bytes).
std::size_t utf8_length(unsigned char lead);

/// Splits into code-point sized byte slices; invalid bytes become 1-byte slices.
std::vector<std::string_view> code_points(std::string_view s);

bool is_ascii_alnum(char c);

}  // namespace narrative::text
