#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stk/span.hpp"

namespace stk {

enum class Lang { kEnglish, kSpanish };

// "en" / "es".
const char* LangCode(Lang lang);
Lang ParseLang(std::string_view code);

// Where one normalized character came from: the original interval
// [original, original + width). Characters of a replacement placeholder all
// point at the first character of the replaced region and carry its width.
struct SourceRef {
  std::size_t original = 0;
  std::size_t width = 1;

  bool operator==(const SourceRef&) const = default;
};

struct NormalizedText {
  std::string original;
  std::string normalized;
  std::vector<SourceRef> offset_map;  // one entry per normalized code point
  Lang lang = Lang::kEnglish;
};

inline constexpr std::string_view kUserPlaceholder = "@user";
std::string_view UrlPlaceholder(Lang lang);

// Replaces @handles with "@user" and URLs (http://, https://, www.) with the
// language's url placeholder. Everything else passes through untouched,
// including the whitespace around a replaced URL.
NormalizedText NormalizeText(std::string_view text, Lang lang);

// "About {claim}. [SEP] {text}". Throws kInvalidArgument on an empty claim.
std::string FormatClaimInput(std::string_view claim, std::string_view text);

// Re-expresses a span over nt.normalized as a span over nt.original; the
// returned text is the original slice. Throws kInvalidArgument when the span
// is empty or outside the normalized text.
Span MapSpanToOriginal(const Span& span, const NormalizedText& nt);

}  // namespace stk
