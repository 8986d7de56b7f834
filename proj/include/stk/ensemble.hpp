#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stk/prediction_set.hpp"

namespace stk {

// Plurality vote. `priority` lists voter indices from most to least trusted;
// an empty priority means input order. When several labels share the top
// count, the answer is the label voted by the most trusted voter among those
// who voted for one of the tied labels.
std::string MajorityVote(std::span<const std::string> votes,
                         std::span<const std::size_t> priority = {});

// Per-record MajorityVote over at least two sets covering the same ids.
// Throws kCoverage listing the ids missing from some set.
PredictionSet EnsemblePredictions(std::span<const PredictionSet> sets,
                                  std::span<const std::size_t> priority = {});

}  // namespace stk
