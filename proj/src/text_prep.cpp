#include "stk/text_prep.hpp"

#include "stk/error.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

bool StartsWithIgnoreCase(std::u32string_view text, std::size_t pos,
                          std::u32string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (utf8::ToLower(text[pos + i]) != prefix[i]) return false;
  }
  return true;
}

// Length of the URL starting at pos, or 0 if none starts there.
std::size_t MatchUrl(std::u32string_view text, std::size_t pos) {
  if (pos > 0 && utf8::IsAlnum(text[pos - 1])) return 0;
  std::size_t prefix = 0;
  for (std::u32string_view scheme : {U"https://", U"http://", U"www."}) {
    if (StartsWithIgnoreCase(text, pos, scheme)) {
      prefix = scheme.size();
      break;
    }
  }
  if (prefix == 0) return 0;
  std::size_t end = pos + prefix;
  while (end < text.size() && !utf8::IsSpace(text[end])) ++end;
  // A bare scheme with nothing after it is not a link.
  return end > pos + prefix ? end - pos : 0;
}

std::size_t MatchUsername(std::u32string_view text, std::size_t pos) {
  if (text[pos] != U'@') return 0;
  std::size_t end = pos + 1;
  while (end < text.size() && utf8::IsWordChar(text[end])) ++end;
  return end > pos + 1 ? end - pos : 0;
}

}  // namespace

const char* LangCode(Lang lang) {
  return lang == Lang::kSpanish ? "es" : "en";
}

Lang ParseLang(std::string_view code) {
  if (code == "en") return Lang::kEnglish;
  if (code == "es") return Lang::kSpanish;
  Fail(ErrorKind::kInvalidArgument,
       "unknown language '" + std::string(code) + "' (expected en or es)");
}

std::string_view UrlPlaceholder(Lang lang) {
  return lang == Lang::kSpanish ? "(ver url)" : "(see url)";
}

NormalizedText NormalizeText(std::string_view text, Lang lang) {
  const std::u32string source = utf8::Decode(text);
  const std::u32string user = utf8::Decode(kUserPlaceholder);
  const std::u32string url = utf8::Decode(UrlPlaceholder(lang));

  std::u32string out;
  NormalizedText result;
  result.original = std::string(text);
  result.lang = lang;
  result.offset_map.reserve(source.size());

  auto emit_replacement = [&](const std::u32string& placeholder,
                              std::size_t at, std::size_t width) {
    out += placeholder;
    result.offset_map.insert(result.offset_map.end(), placeholder.size(),
                             SourceRef{at, width});
  };

  std::size_t pos = 0;
  while (pos < source.size()) {
    if (std::size_t n = MatchUrl(source, pos); n > 0) {
      emit_replacement(url, pos, n);
      pos += n;
    } else if (std::size_t m = MatchUsername(source, pos); m > 0) {
      emit_replacement(user, pos, m);
      pos += m;
    } else {
      out.push_back(source[pos]);
      result.offset_map.push_back(SourceRef{pos, 1});
      ++pos;
    }
  }
  result.normalized = utf8::Encode(out);
  return result;
}

std::string FormatClaimInput(std::string_view claim, std::string_view text) {
  if (claim.empty()) Fail(ErrorKind::kInvalidArgument, "claim is empty");
  std::string out = "About ";
  out += claim;
  out += ". [SEP] ";
  out += text;
  return out;
}

Span MapSpanToOriginal(const Span& span, const NormalizedText& nt) {
  if (span.start >= span.end || span.end > nt.offset_map.size()) {
    Fail(ErrorKind::kInvalidArgument,
         "span [" + std::to_string(span.start) + ", " +
             std::to_string(span.end) + ") outside normalized text of length " +
             std::to_string(nt.offset_map.size()));
  }
  const SourceRef& first = nt.offset_map[span.start];
  const SourceRef& last = nt.offset_map[span.end - 1];
  Span out;
  out.start = first.original;
  out.end = last.original + last.width;
  out.category = span.category;
  out.text = utf8::Slice(nt.original, out.start, out.end);
  return out;
}

}  // namespace stk
