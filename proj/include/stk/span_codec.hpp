#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stk/span.hpp"

namespace stk {

struct Token {
  std::string text;
  std::size_t start = 0;  // code points, end exclusive
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

enum class BioTag { kB, kI, kO };

// Runs of alphanumerics form one token; every other non-space character is a
// token on its own.
std::vector<Token> Tokenize(std::string_view text);

// "B", "I", "O", or "B-X" / "I-X" when a category is given.
std::string BioTagName(BioTag tag, std::string_view category = {});
BioTag ParseBioTag(std::string_view name);

// Spans must be non-overlapping and start/end on token boundaries
// (kAlignment otherwise, naming the span). Order does not matter.
std::vector<BioTag> EncodeBio(std::span<const Token> tokens,
                              std::span<const Span> spans);

// B opens a span and I extends it; an I that follows O (or starts the
// sequence) is read as B. Span text is the slice of `source`, the text the
// tokens were produced from. Throws kShape on a length mismatch.
std::vector<Span> DecodeBio(std::span<const Token> tokens,
                            std::span<const BioTag> tags,
                            std::string_view source,
                            std::string_view category);

}  // namespace stk
