#include "stk/span_codec.hpp"

#include <algorithm>
#include <map>

#include "stk/error.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

std::string Describe(const Span& s) {
  return "[" + std::to_string(s.start) + ", " + std::to_string(s.end) + ") '" +
         s.text + "'";
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  const std::u32string cps = utf8::Decode(text);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::IsSpace(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (utf8::IsAlnum(cps[i])) {
      while (j < cps.size() && utf8::IsAlnum(cps[j])) ++j;
    }
    tokens.push_back(Token{utf8::Encode(std::u32string_view(cps).substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

std::string BioTagName(BioTag tag, std::string_view category) {
  if (tag == BioTag::kO) return "O";
  std::string out = tag == BioTag::kB ? "B" : "I";
  if (!category.empty()) {
    out += '-';
    out += category;
  }
  return out;
}

BioTag ParseBioTag(std::string_view name) {
  if (name == "O") return BioTag::kO;
  if (!name.empty() && (name.size() == 1 || name[1] == '-')) {
    if (name[0] == 'B') return BioTag::kB;
    if (name[0] == 'I') return BioTag::kI;
  }
  Fail(ErrorKind::kInvalidArgument, "bad BIO tag '" + std::string(name) + "'");
}

std::vector<BioTag> EncodeBio(std::span<const Token> tokens,
                              std::span<const Span> spans) {
  std::vector<const Span*> sorted;
  for (const Span& s : spans) {
    if (s.start >= s.end) {
      Fail(ErrorKind::kInvalidArgument, "empty span " + Describe(s));
    }
    sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Span* a, const Span* b) {
    return a->start < b->start;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (Overlaps(*sorted[i - 1], *sorted[i])) {
      Fail(ErrorKind::kInvalidArgument, "overlapping spans " +
                                            Describe(*sorted[i - 1]) + " and " +
                                            Describe(*sorted[i]));
    }
  }

  std::map<std::size_t, std::size_t> token_at_start;
  std::map<std::size_t, std::size_t> token_at_end;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    token_at_start[tokens[t].start] = t;
    token_at_end[tokens[t].end] = t;
  }

  std::vector<BioTag> tags(tokens.size(), BioTag::kO);
  for (const Span* s : sorted) {
    const auto first = token_at_start.find(s->start);
    const auto last = token_at_end.find(s->end);
    if (first == token_at_start.end() || last == token_at_end.end() ||
        last->second < first->second) {
      Fail(ErrorKind::kAlignment,
           "span " + Describe(*s) + " does not align with token boundaries");
    }
    tags[first->second] = BioTag::kB;
    for (std::size_t t = first->second + 1; t <= last->second; ++t) {
      tags[t] = BioTag::kI;
    }
  }
  return tags;
}

std::vector<Span> DecodeBio(std::span<const Token> tokens,
                            std::span<const BioTag> tags,
                            std::string_view source,
                            std::string_view category) {
  if (tokens.size() != tags.size()) {
    Fail(ErrorKind::kShape, std::to_string(tokens.size()) + " tokens but " +
                                std::to_string(tags.size()) + " tags");
  }
  const std::u32string cps = utf8::Decode(source);
  std::vector<Span> spans;
  bool open = false;
  auto close = [&] {
    if (!open) return;
    Span& s = spans.back();
    if (s.end > cps.size()) {
      Fail(ErrorKind::kInvalidArgument, "token offsets exceed source text");
    }
    s.text = utf8::Encode(std::u32string_view(cps).substr(s.start, s.end - s.start));
    open = false;
  };
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tags[t] == BioTag::kO) {
      close();
    } else if (tags[t] == BioTag::kB || !open) {
      close();
      spans.push_back(Span{tokens[t].start, tokens[t].end, "", std::string(category)});
      open = true;
    } else {
      spans.back().end = tokens[t].end;
    }
  }
  close();
  return spans;
}

}  // namespace stk
