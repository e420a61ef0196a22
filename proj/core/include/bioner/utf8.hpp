#ifndef BIONER_UTF8_HPP
#define BIONER_UTF8_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bioner::utf8 {

/// Decodes a UTF-8 string into Unicode scalar values. Invalid bytes decode
/// as U+FFFD, one replacement per byte.
std::vector<char32_t> decode(std::string_view text);

/// Number of Unicode scalar values in the string.
std::size_t length(std::string_view text);

/// Encodes a single scalar value back to UTF-8 and appends it to out.
void append(std::u32string_view scalars, std::string& out);
void append(char32_t scalar, std::string& out);

/// Substring by scalar offsets [start, end). Offsets past the end clamp.
std::string substr(std::string_view text, std::size_t start, std::size_t end);

std::string encode(const std::vector<char32_t>& scalars, std::size_t start, std::size_t end);

}  // namespace bioner::utf8

#endif
