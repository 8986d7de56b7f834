#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "stk/model_file.hpp"
#include "stk/span_codec.hpp"
#include "stk/text_prep.hpp"
#include "stk/toy_classifier.hpp"

// Token-level use of the toy classifier: each token of the normalized text is
// classified as B, I or O from a small window of neighbouring tokens.
namespace stk {

inline constexpr std::string_view kBioWindowFeatures = "bio-window";

// Class indices of a bio model, in label order.
inline constexpr std::size_t kTagB = 0;
inline constexpr std::size_t kTagI = 1;
inline constexpr std::size_t kTagO = 2;

std::vector<FeatureVector> TokenWindowFeatures(std::span<const Token> tokens,
                                               std::size_t dim);

// Gold spans over nt.original re-expressed as token-aligned spans over
// nt.normalized: each covers the normalized tokens whose source overlaps it.
// A span whose tokens were already claimed by an earlier span is dropped.
std::vector<Span> ProjectSpansToTokens(std::span<const Span> original_spans,
                                       std::span<const Token> tokens,
                                       const NormalizedText& nt);

// Normalizes, tags and decodes; spans come back in original-text offsets.
std::vector<Span> TagSpans(const ToyModel& model, std::string_view text, Lang lang);

}  // namespace stk
