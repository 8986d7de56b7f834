#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stk/prediction_set.hpp"
#include "stk/span.hpp"

namespace stk {

// Every ratio with a zero denominator is reported as 0.
struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Metrics&) const = default;
};

// F1 is computed as 2tp / (n_pred + n_gold), which equals 2PR / (P + R) and
// is exactly equal to P when n_pred == n_gold.
Metrics MetricsFromCounts(std::size_t tp, std::size_t n_pred, std::size_t n_gold);

// Rows are gold labels, columns predictions.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t IndexOf(std::string_view label) const;  // kUnknownLabel
  std::size_t total() const;
};

// gold and pred must have the same ids (kCoverage); labels outside `classes`
// raise kUnknownLabel.
ConfusionMatrix Confusion(const LabelMap& gold, const LabelMap& pred,
                          std::span<const std::string> classes);

struct PerClass {
  std::string label;
};
struct Micro {};
struct Macro {};  // unweighted mean of the per-class P, R and F1
using Averaging = std::variant<PerClass, Micro, Macro>;

Metrics ClassificationMetrics(const ConfusionMatrix& cm, const Averaging& mode);

// Chance-corrected agreement. Returns 1 when the two label maps agree on
// every record; throws kDegenerateMarginals when expected agreement is 1 but
// observed agreement is not.
double CohensKappa(const LabelMap& a, const LabelMap& b);

struct AgreementMatrix {
  std::vector<std::string> model_ids;
  std::vector<std::vector<double>> kappas;  // symmetric, unit diagonal
};

AgreementMatrix ComputeAgreement(std::span<const PredictionSet> sets);

enum class MatchMode { kStrict, kRelaxed };

const char* MatchModeName(MatchMode mode);
MatchMode ParseMatchMode(std::string_view name);

// record id -> spans of that record
using SpanMap = std::map<std::string, std::vector<Span>>;

struct SpanScore {
  Metrics metrics;
  std::size_t true_positives = 0;
  std::size_t num_pred = 0;
  std::size_t num_gold = 0;
};

// Pooled over records; a record missing from one side has no spans there.
// Strict matches need identical boundaries, relaxed ones any shared
// character. Matching is one-to-one, scanning both sides in offset order.
// Spans overlapping within one side raise kInvalidArgument.
SpanScore SpanMetrics(const SpanMap& gold, const SpanMap& pred, MatchMode mode);

struct TermSpan {
  Span span;
  std::string term_id;
  std::string term_text;

  bool operator==(const TermSpan&) const = default;
};

using TermMap = std::map<std::string, std::vector<TermSpan>>;

// A prediction is correct when its span matches a gold span under `mode` and
// carries the same term id; gold and predictions pair up one-to-one using a
// maximum matching on those correct pairs.
SpanScore NormalizationMetrics(const TermMap& gold, const TermMap& pred,
                               MatchMode mode);

}  // namespace stk
