#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stk/metrics.hpp"
#include "stk/prediction_set.hpp"
#include "stk/span.hpp"
#include "stk/text_prep.hpp"

// Line-delimited JSON interchange files: one record per line, blank lines
// ignored. Span offsets are code points into the record's original text.
//
//   {"id": "t1", "lang": "en", "text": "...", "claim": "face masks",
//    "label": "Favor-1",
//    "spans": [{"start": 0, "end": 3, "text": "flu", "category": "DISEASE"}],
//    "terms": [{"start": 0, "end": 3, "text": "flu", "term_id": "X",
//               "term_text": "influenza"}]}
namespace stk {

enum class Schema {
  kClassify,  // label optional
  kStance,    // claim required; label, when present, is a joint label
  kNer,       // spans required
  kNorm,      // terms required
};

const char* SchemaName(Schema schema);

struct LabeledRecord {
  std::string id;
  std::string text;
  Lang lang = Lang::kEnglish;
  std::optional<std::string> claim;
  std::optional<std::string> label;
  std::optional<std::vector<Span>> spans;
  std::optional<std::vector<TermSpan>> terms;

  bool operator==(const LabeledRecord&) const = default;
};

struct ReadOptions {
  Lang default_lang = Lang::kEnglish;  // for records without "lang"
};

// Throws kParse (with line number) on malformed lines, kSchema when a record
// lacks what the schema needs or its spans do not fit its text, and
// kIntegrity on a repeated id.
std::vector<LabeledRecord> ReadRecords(std::istream& in, Schema schema,
                                       const ReadOptions& options = {},
                                       std::string_view source = "<records>");
std::vector<LabeledRecord> ReadRecords(const std::string& path, Schema schema,
                                       const ReadOptions& options = {});

void WriteRecords(std::ostream& out, const std::vector<LabeledRecord>& records);
void WriteRecords(const std::string& path, const std::vector<LabeledRecord>& records);

// Prediction files share the record layout but carry no text:
//   {"id": "t1", "label": "Favor", "model": "m1", "probs": [...]}
//   {"id": "t1", "model": "m1", "spans": [...]}
//   {"id": "t1", "model": "m1", "terms": [...]}
// The model id comes from the "model" fields (which must agree) or else the
// file name without extension.
PredictionSet ReadLabelPredictions(const std::string& path);
SpanMap ReadSpanPredictions(const std::string& path);
TermMap ReadTermPredictions(const std::string& path);

struct LabelPrediction {
  std::string id;
  std::string label;
  std::vector<double> probs;  // optional, empty to omit
};

void WriteLabelPredictions(std::ostream& out, std::string_view model_id,
                           const std::vector<LabelPrediction>& predictions);
void WriteSpanPredictions(std::ostream& out, std::string_view model_id,
                          const SpanMap& spans);
void WriteTermPredictions(std::ostream& out, std::string_view model_id,
                          const TermMap& terms);

}  // namespace stk
