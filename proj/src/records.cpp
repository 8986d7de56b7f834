#include "stk/records.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <json.hpp>

#include "stk/error.hpp"
#include "stk/joint_labels.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

using nlohmann::json;

class LineError {
 public:
  LineError(std::string_view source, std::size_t line)
      : prefix_(std::string(source) + ":" + std::to_string(line) + ": ") {}

  [[noreturn]] void operator()(ErrorKind kind, const std::string& what) const {
    Fail(kind, prefix_ + what);
  }

 private:
  std::string prefix_;
};

// Calls fn(json, line_no) for each non-blank line.
void ForEachJsonLine(std::istream& in, std::string_view source,
                     const std::function<void(const json&, const LineError&)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const LineError err(source, line_no);
    if (!utf8::IsValid(line)) err(ErrorKind::kParse, "invalid UTF-8");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      err(ErrorKind::kParse, e.what());
    }
    if (!j.is_object()) err(ErrorKind::kParse, "record is not a JSON object");
    try {
      fn(j, err);
    } catch (const json::exception& e) {
      err(ErrorKind::kParse, e.what());
    }
  }
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write '" + path + "'");
  return out;
}

std::string RequireString(const json& j, const char* key, const LineError& err,
                          ErrorKind kind = ErrorKind::kParse) {
  const auto it = j.find(key);
  if (it == j.end()) err(kind, std::string("missing \"") + key + "\"");
  if (!it->is_string()) err(ErrorKind::kParse, std::string("\"") + key + "\" is not a string");
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& j, const char* key,
                                          const LineError& err) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) err(ErrorKind::kParse, std::string("\"") + key + "\" is not a string");
  return it->get<std::string>();
}

std::size_t RequireOffset(const json& j, const char* key, const LineError& err) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) {
    err(ErrorKind::kParse, std::string("span needs a non-negative integer \"") + key + "\"");
  }
  return it->get<std::size_t>();
}

Span ParseSpan(const json& j, const LineError& err) {
  if (!j.is_object()) err(ErrorKind::kParse, "span is not an object");
  Span s;
  s.start = RequireOffset(j, "start", err);
  s.end = RequireOffset(j, "end", err);
  s.text = OptionalString(j, "text", err).value_or("");
  s.category = OptionalString(j, "category", err).value_or("");
  return s;
}

TermSpan ParseTerm(const json& j, const LineError& err) {
  TermSpan t;
  t.span = ParseSpan(j, err);
  t.term_id = RequireString(j, "term_id", err);
  t.term_text = OptionalString(j, "term_text", err).value_or("");
  return t;
}

template <typename T>
std::optional<std::vector<T>> ParseList(const json& j, const char* key,
                                        T (*parse)(const json&, const LineError&),
                                        const LineError& err) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) err(ErrorKind::kParse, std::string("\"") + key + "\" is not an array");
  std::vector<T> out;
  for (const json& item : *it) out.push_back(parse(item, err));
  return out;
}

// Checks bounds, sliced text and overlap against the record text; fills in
// missing span text.
void FitSpans(std::vector<Span*> spans, const std::u32string& text,
              const LineError& err) {
  for (Span* s : spans) {
    if (s->start >= s->end || s->end > text.size()) {
      err(ErrorKind::kSchema, "span [" + std::to_string(s->start) + ", " +
                                  std::to_string(s->end) + ") is empty or outside the text");
    }
    const std::string slice = utf8::Encode(
        std::u32string_view(text).substr(s->start, s->end - s->start));
    if (s->text.empty()) {
      s->text = slice;
    } else if (s->text != slice) {
      err(ErrorKind::kSchema, "span text '" + s->text + "' does not match text '" +
                                  slice + "' at its offsets");
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span* a, const Span* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (Overlaps(*spans[i - 1], *spans[i])) err(ErrorKind::kSchema, "overlapping spans");
  }
}

void CheckNoSpanOverlap(std::vector<Span*> spans, const LineError& err) {
  for (Span* s : spans) {
    if (s->start >= s->end) err(ErrorKind::kSchema, "empty span");
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span* a, const Span* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (Overlaps(*spans[i - 1], *spans[i])) err(ErrorKind::kSchema, "overlapping spans");
  }
}

json SpanJson(const Span& s) {
  json j = {{"start", s.start}, {"end", s.end}, {"text", s.text}};
  if (!s.category.empty()) j["category"] = s.category;
  return j;
}

json TermJson(const TermSpan& t) {
  json j = SpanJson(t.span);
  j["term_id"] = t.term_id;
  j["term_text"] = t.term_text;
  return j;
}

std::string DefaultModelId(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Reads the "id" and "model" fields shared by every prediction line.
class PredictionHeader {
 public:
  explicit PredictionHeader(std::string path) : path_(std::move(path)) {}

  std::string Id(const json& j, const LineError& err) {
    std::string id = RequireString(j, "id", err);
    if (!ids_.insert(id).second) err(ErrorKind::kIntegrity, "duplicate id '" + id + "'");
    if (auto model = OptionalString(j, "model", err)) {
      if (model_ && *model_ != *model) {
        err(ErrorKind::kIntegrity, "conflicting model ids '" + *model_ + "' and '" + *model + "'");
      }
      model_ = *model;
    }
    return id;
  }

  std::string model_id() const { return model_.value_or(DefaultModelId(path_)); }

 private:
  std::string path_;
  std::set<std::string> ids_;
  std::optional<std::string> model_;
};

}  // namespace

const char* SchemaName(Schema schema) {
  switch (schema) {
    case Schema::kClassify: return "classify";
    case Schema::kStance: return "stance";
    case Schema::kNer: return "ner";
    case Schema::kNorm: return "norm";
  }
  return "";
}

std::vector<LabeledRecord> ReadRecords(std::istream& in, Schema schema,
                                       const ReadOptions& options,
                                       std::string_view source) {
  std::vector<LabeledRecord> records;
  std::set<std::string> ids;
  ForEachJsonLine(in, source, [&](const json& j, const LineError& err) {
    LabeledRecord r;
    r.id = RequireString(j, "id", err);
    if (r.id.empty()) err(ErrorKind::kParse, "empty id");
    r.text = RequireString(j, "text", err);
    if (auto lang = OptionalString(j, "lang", err)) {
      try {
        r.lang = ParseLang(*lang);
      } catch (const Error& e) {
        err(ErrorKind::kParse, e.what());
      }
    } else {
      r.lang = options.default_lang;
    }
    r.claim = OptionalString(j, "claim", err);
    r.label = OptionalString(j, "label", err);
    r.spans = ParseList<Span>(j, "spans", ParseSpan, err);
    r.terms = ParseList<TermSpan>(j, "terms", ParseTerm, err);

    if (schema == Schema::kStance) {
      if (!r.claim || r.claim->empty()) {
        err(ErrorKind::kSchema, "stance records need a non-empty \"claim\"");
      }
      if (r.label) {
        try {
          ParseJoint(*r.label);
        } catch (const Error&) {
          err(ErrorKind::kSchema, "stance label '" + *r.label +
                                      "' is not a joint label such as Favor-1");
        }
      }
    }
    if (schema == Schema::kNer && !r.spans) {
      err(ErrorKind::kSchema, "ner records need \"spans\"");
    }
    if (schema == Schema::kNorm && !r.terms) {
      err(ErrorKind::kSchema, "norm records need \"terms\"");
    }
    if (r.label && (r.label->empty() ||
                    r.label->find_first_of(" \t\r\n") != std::string::npos)) {
      err(ErrorKind::kSchema, "labels must be non-empty and contain no whitespace");
    }

    const std::u32string text = utf8::Decode(r.text);
    if (r.spans) {
      std::vector<Span*> ptrs;
      for (Span& s : *r.spans) ptrs.push_back(&s);
      FitSpans(ptrs, text, err);
    }
    if (r.terms) {
      std::vector<Span*> ptrs;
      for (TermSpan& t : *r.terms) ptrs.push_back(&t.span);
      FitSpans(ptrs, text, err);
    }
    if (!ids.insert(r.id).second) err(ErrorKind::kIntegrity, "duplicate id '" + r.id + "'");
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<LabeledRecord> ReadRecords(const std::string& path, Schema schema,
                                       const ReadOptions& options) {
  std::ifstream in = OpenInput(path);
  return ReadRecords(in, schema, options, path);
}

void WriteRecords(std::ostream& out, const std::vector<LabeledRecord>& records) {
  for (const LabeledRecord& r : records) {
    json j = {{"id", r.id}, {"text", r.text}, {"lang", LangCode(r.lang)}};
    if (r.claim) j["claim"] = *r.claim;
    if (r.label) j["label"] = *r.label;
    if (r.spans) {
      j["spans"] = json::array();
      for (const Span& s : *r.spans) j["spans"].push_back(SpanJson(s));
    }
    if (r.terms) {
      j["terms"] = json::array();
      for (const TermSpan& t : *r.terms) j["terms"].push_back(TermJson(t));
    }
    out << j.dump() << '\n';
  }
}

void WriteRecords(const std::string& path, const std::vector<LabeledRecord>& records) {
  std::ofstream out = OpenOutput(path);
  WriteRecords(out, records);
}

PredictionSet ReadLabelPredictions(const std::string& path) {
  std::ifstream in = OpenInput(path);
  PredictionHeader header(path);
  PredictionSet set;
  ForEachJsonLine(in, path, [&](const json& j, const LineError& err) {
    std::string id = header.Id(j, err);
    std::string label = RequireString(j, "label", err, ErrorKind::kSchema);
    if (label.empty()) err(ErrorKind::kSchema, "empty label");
    set.labels.emplace(std::move(id), std::move(label));
  });
  set.model_id = header.model_id();
  return set;
}

SpanMap ReadSpanPredictions(const std::string& path) {
  std::ifstream in = OpenInput(path);
  PredictionHeader header(path);
  SpanMap out;
  ForEachJsonLine(in, path, [&](const json& j, const LineError& err) {
    std::string id = header.Id(j, err);
    auto spans = ParseList<Span>(j, "spans", ParseSpan, err);
    if (!spans) err(ErrorKind::kSchema, "span predictions need \"spans\"");
    std::vector<Span*> ptrs;
    for (Span& s : *spans) ptrs.push_back(&s);
    CheckNoSpanOverlap(ptrs, err);
    out.emplace(std::move(id), std::move(*spans));
  });
  return out;
}

TermMap ReadTermPredictions(const std::string& path) {
  std::ifstream in = OpenInput(path);
  PredictionHeader header(path);
  TermMap out;
  ForEachJsonLine(in, path, [&](const json& j, const LineError& err) {
    std::string id = header.Id(j, err);
    auto terms = ParseList<TermSpan>(j, "terms", ParseTerm, err);
    if (!terms) err(ErrorKind::kSchema, "term predictions need \"terms\"");
    std::vector<Span*> ptrs;
    for (TermSpan& t : *terms) ptrs.push_back(&t.span);
    CheckNoSpanOverlap(ptrs, err);
    out.emplace(std::move(id), std::move(*terms));
  });
  return out;
}

void WriteLabelPredictions(std::ostream& out, std::string_view model_id,
                           const std::vector<LabelPrediction>& predictions) {
  for (const LabelPrediction& p : predictions) {
    json j = {{"id", p.id}, {"label", p.label}, {"model", model_id}};
    if (!p.probs.empty()) j["probs"] = p.probs;
    out << j.dump() << '\n';
  }
}

void WriteSpanPredictions(std::ostream& out, std::string_view model_id,
                          const SpanMap& spans) {
  for (const auto& [id, list] : spans) {
    json j = {{"id", id}, {"model", model_id}, {"spans", json::array()}};
    for (const Span& s : list) j["spans"].push_back(SpanJson(s));
    out << j.dump() << '\n';
  }
}

void WriteTermPredictions(std::ostream& out, std::string_view model_id,
                          const TermMap& terms) {
  for (const auto& [id, list] : terms) {
    json j = {{"id", id}, {"model", model_id}, {"terms", json::array()}};
    for (const TermSpan& t : list) j["terms"].push_back(TermJson(t));
    out << j.dump() << '\n';
  }
}

}  // namespace stk
