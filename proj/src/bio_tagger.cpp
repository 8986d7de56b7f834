#include "stk/bio_tagger.hpp"

#include <algorithm>
#include <string>

#include "stk/error.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

std::string Lower(const std::string& s) {
  return utf8::Encode(utf8::ToLower(utf8::Decode(s)));
}

// Coarse character-class shape, e.g. "Xxxx" -> "Xx", "2022" -> "d".
std::string Shape(const std::string& token) {
  std::string out;
  for (char32_t cp : utf8::Decode(token)) {
    char c;
    if (cp >= U'0' && cp <= U'9') {
      c = 'd';
    } else if (utf8::IsAlnum(cp)) {
      c = utf8::ToLower(cp) == cp ? 'x' : 'X';
    } else {
      c = 'p';
    }
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<FeatureVector> TokenWindowFeatures(std::span<const Token> tokens,
                                               std::size_t dim) {
  std::vector<std::string> lowered;
  for (const Token& t : tokens) lowered.push_back(Lower(t.text));
  std::vector<FeatureVector> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& w = lowered[i];
    const std::u32string cps = utf8::Decode(w);
    std::vector<std::string> f = {
        "w=" + w,
        "shape=" + Shape(tokens[i].text),
        "prev=" + (i > 0 ? lowered[i - 1] : std::string("<s>")),
        "next=" + (i + 1 < tokens.size() ? lowered[i + 1] : std::string("</s>")),
        "sfx=" + utf8::Encode(std::u32string_view(cps).substr(cps.size() > 3 ? cps.size() - 3 : 0)),
        "bias",
    };
    out.push_back(HashFeatures(f, dim));
  }
  return out;
}

std::vector<Span> ProjectSpansToTokens(std::span<const Span> original_spans,
                                       std::span<const Token> tokens,
                                       const NormalizedText& nt) {
  std::vector<const Span*> sorted;
  for (const Span& s : original_spans) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const Span* a, const Span* b) { return a->start < b->start; });

  const std::u32string normalized = utf8::Decode(nt.normalized);
  std::vector<Span> out;
  std::size_t claimed_end = 0;  // normalized offset past the last emitted span
  for (const Span* s : sorted) {
    std::size_t first = tokens.size(), last = 0;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      const SourceRef& a = nt.offset_map[tokens[t].start];
      const SourceRef& b = nt.offset_map[tokens[t].end - 1];
      const std::size_t src_begin = a.original;
      const std::size_t src_end = b.original + b.width;
      if (src_begin < s->end && s->start < src_end) {
        first = std::min(first, t);
        last = t;
      }
    }
    if (first == tokens.size() || tokens[first].start < claimed_end) continue;
    Span projected;
    projected.start = tokens[first].start;
    projected.end = tokens[last].end;
    projected.category = s->category;
    projected.text = utf8::Encode(std::u32string_view(normalized).substr(
        projected.start, projected.end - projected.start));
    claimed_end = projected.end;
    out.push_back(std::move(projected));
  }
  return out;
}

std::vector<Span> TagSpans(const ToyModel& model, std::string_view text, Lang lang) {
  if (model.features != kBioWindowFeatures || model.params.num_classes != 3) {
    Fail(ErrorKind::kInvalidArgument, "model is not a BIO tagger");
  }
  const NormalizedText nt = NormalizeText(text, lang);
  const std::vector<Token> tokens = Tokenize(nt.normalized);
  const std::vector<FeatureVector> features = TokenWindowFeatures(tokens, model.params.dim);
  std::vector<BioTag> tags;
  tags.reserve(tokens.size());
  for (const FeatureVector& x : features) {
    const std::vector<double> z = Logits(model.params, x);
    const std::size_t best =
        static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    tags.push_back(best == kTagB ? BioTag::kB : best == kTagI ? BioTag::kI : BioTag::kO);
  }
  std::vector<Span> spans;
  for (const Span& s : DecodeBio(tokens, tags, nt.normalized, model.category)) {
    Span mapped = MapSpanToOriginal(s, nt);
    // Pieces of one placeholder map onto the same original region.
    if (!spans.empty() && spans.back().end > mapped.start) {
      Span& prev = spans.back();
      prev.end = std::max(prev.end, mapped.end);
      prev.text = utf8::Slice(nt.original, prev.start, prev.end);
      continue;
    }
    spans.push_back(std::move(mapped));
  }
  return spans;
}

}  // namespace stk
