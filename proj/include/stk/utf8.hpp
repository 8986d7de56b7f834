#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. All offsets exposed by the library count Unicode code
// points, not bytes, so that span offsets agree with what annotation tools
// (and Python-based scorers) report.
namespace stk::utf8 {

// Throws Error(kInvalidArgument) on malformed input.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t cp);

bool IsValid(std::string_view text);
std::size_t Length(std::string_view text);

// Code-point slice [begin, end). Throws on out-of-range bounds.
std::string Slice(std::string_view text, std::size_t begin, std::size_t end);

bool IsSpace(char32_t cp);
// ASCII letters/digits, plus every non-ASCII code point that is neither
// whitespace nor one of the common non-ASCII punctuation marks.
bool IsAlnum(char32_t cp);
bool IsWordChar(char32_t cp);  // [A-Za-z0-9_]

// ASCII and Latin-1 uppercase folding. Locale independent.
char32_t ToLower(char32_t cp);
std::u32string ToLower(std::u32string_view text);

}  // namespace stk::utf8
