#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stk/records.hpp"
#include "stk/utf8.hpp"
#include "support/test_util.hpp"

namespace stk {
namespace {

using testing::ThrownKind;
using testing::ThrownMessage;

const std::string kData = STK_TEST_DATA;

std::vector<LabeledRecord> Parse(const std::string& text, Schema schema = Schema::kClassify) {
  std::istringstream in(text);
  return ReadRecords(in, schema, {}, "mem");
}

std::filesystem::path TempDir() {
  const auto dir = std::filesystem::temp_directory_path() / "stk_records_test";
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

TEST_CASE("golden record files") {
  const auto stance = ReadRecords(kData + "/stance.jsonl", Schema::kStance);
  REQUIRE(stance.size() == 3);
  CHECK(stance[0].id == "m1");
  CHECK(stance[0].claim == "face masks");
  CHECK(stance[0].label == "Favor-1");
  CHECK(stance[2].lang == Lang::kSpanish);

  const auto ner = ReadRecords(kData + "/ner.jsonl", Schema::kNer, {Lang::kSpanish});
  REQUIRE(ner.size() == 2);
  REQUIRE(ner[0].spans->size() == 2);
  CHECK((*ner[0].spans)[1].text == "dolor de cabeza");
  CHECK(ner[1].spans->empty());

  const auto norm = ReadRecords(kData + "/norm.jsonl", Schema::kNorm, {Lang::kSpanish});
  CHECK(norm[0].lang == Lang::kSpanish);
  CHECK((*norm[1].terms)[1].span.text == "fever");
  CHECK((*norm[1].terms)[1].term_id == "10037660");
}

TEST_CASE("empty and blank files") {
  CHECK(Parse("").empty());
  CHECK(Parse("\n  \n\r\n").empty());
}

TEST_CASE("parse errors carry the line number") {
  const std::string good = R"({"id": "a", "text": "x"})" "\n";
  auto kind = [](const std::string& text, Schema s = Schema::kClassify) {
    return ThrownKind([&] { Parse(text, s); });
  };
  CHECK(kind(good + "{not json}\n") == ErrorKind::kParse);
  CHECK(ThrownMessage([&] { Parse(good + "\n{not json}\n"); }).find("mem:3:") != std::string::npos);
  CHECK(kind("[1, 2]\n") == ErrorKind::kParse);
  CHECK(kind(R"({"text": "x"})") == ErrorKind::kParse);
  CHECK(kind(R"({"id": 3, "text": "x"})") == ErrorKind::kParse);
  CHECK(kind(R"({"id": "a", "text": "x", "lang": "fr"})") == ErrorKind::kParse);
  CHECK(kind("{\"id\": \"a\", \"text\": \"\xff\"}") == ErrorKind::kParse);
  CHECK(kind(R"({"id": "a", "text": "x", "spans": [{"start": -1, "end": 1}]})") == ErrorKind::kParse);
}

TEST_CASE("schema and integrity errors") {
  auto kind = [](const std::string& text, Schema s = Schema::kClassify) {
    return ThrownKind([&] { Parse(text, s); });
  };
  CHECK(kind(R"({"id": "a", "text": "x", "label": "Favor-1"})", Schema::kStance) == ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "x", "claim": "c", "label": "Favor"})", Schema::kStance) ==
        ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "x"})", Schema::kNer) == ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "x"})", Schema::kNorm) == ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "x", "label": "two words"})") == ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "abc", "spans": [{"start": 1, "end": 4}]})") == ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "abc", "spans": [{"start": 0, "end": 2, "text": "bc"}]})") ==
        ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "abcd", "spans": [{"start": 0, "end": 2}, {"start": 1, "end": 3}]})") ==
        ErrorKind::kSchema);
  CHECK(kind(R"({"id": "a", "text": "x"})" "\n" R"({"id": "a", "text": "y"})") == ErrorKind::kIntegrity);
  CHECK(ThrownKind([] { ReadRecords("/nonexistent/x.jsonl", Schema::kClassify); }) == ErrorKind::kIo);

  // Span offsets count code points.
  const auto r = Parse(R"({"id": "a", "text": "¿sí?", "spans": [{"start": 1, "end": 3}]})");
  CHECK((*r[0].spans)[0].text == "sí");
}

TEST_CASE("write then read round-trips random records") {
  std::mt19937_64 rng(19);
  const std::u32string alphabet = U"ab ¿ñé\"\\\t@/:";
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<LabeledRecord> records;
    for (std::size_t i = testing::Uniform(rng, 0, 5); i > 0; --i) {
      LabeledRecord r;
      r.id = "id" + std::to_string(records.size());
      std::u32string text;
      for (std::size_t n = testing::Uniform(rng, 0, 20); n > 0; --n) {
        text += alphabet[testing::Uniform(rng, 0, alphabet.size() - 1)];
      }
      r.text = utf8::Encode(text);
      r.lang = testing::Uniform(rng, 0, 1) ? Lang::kSpanish : Lang::kEnglish;
      if (testing::Uniform(rng, 0, 1)) r.claim = "face masks";
      if (testing::Uniform(rng, 0, 1)) r.label = "Favor-0";
      r.spans.emplace();
      std::size_t pos = 0;
      while (pos + 2 <= text.size() && testing::Uniform(rng, 0, 2) == 0) {
        const std::size_t start = testing::Uniform(rng, pos, text.size() - 1);
        const std::size_t end = testing::Uniform(rng, start + 1, text.size());
        r.spans->push_back({start, end, utf8::Slice(r.text, start, end), "ADE"});
        pos = end;
      }
      records.push_back(std::move(r));
    }
    std::ostringstream out;
    WriteRecords(out, records);
    CHECK(Parse(out.str()) == records);
  }
}

TEST_CASE("prediction files") {
  const auto dir = TempDir();
  SUBCASE("labels round-trip and take the model id from the file") {
    std::ostringstream out;
    WriteLabelPredictions(out, "m7", {{"a", "Favor", {0.25, 0.75}}, {"b", "None", {}}});
    WriteFile(dir / "ignored.jsonl", out.str());
    const PredictionSet set = ReadLabelPredictions((dir / "ignored.jsonl").string());
    CHECK(set.model_id == "m7");
    CHECK(set.labels == LabelMap{{"a", "Favor"}, {"b", "None"}});

    WriteFile(dir / "bert.jsonl", R"({"id": "a", "label": "x"})" "\n");
    CHECK(ReadLabelPredictions((dir / "bert.jsonl").string()).model_id == "bert");
  }
  SUBCASE("conflicts and duplicates") {
    WriteFile(dir / "c.jsonl", R"({"id": "a", "label": "x", "model": "p"})" "\n"
                               R"({"id": "b", "label": "x", "model": "q"})" "\n");
    CHECK(ThrownKind([&] { ReadLabelPredictions((dir / "c.jsonl").string()); }) == ErrorKind::kIntegrity);
    WriteFile(dir / "d.jsonl", R"({"id": "a", "label": "x"})" "\n" R"({"id": "a", "label": "y"})" "\n");
    CHECK(ThrownKind([&] { ReadLabelPredictions((dir / "d.jsonl").string()); }) == ErrorKind::kIntegrity);
    WriteFile(dir / "e.jsonl", R"({"id": "a"})" "\n");
    CHECK(ThrownKind([&] { ReadLabelPredictions((dir / "e.jsonl").string()); }) == ErrorKind::kSchema);
  }
  SUBCASE("spans and terms round-trip") {
    const SpanMap spans = {{"a", {{0, 3, "flu", "DISEASE"}}}, {"b", {}}};
    std::ostringstream s;
    WriteSpanPredictions(s, "tagger", spans);
    WriteFile(dir / "s.jsonl", s.str());
    CHECK(ReadSpanPredictions((dir / "s.jsonl").string()) == spans);

    const TermMap terms = {{"a", {{{0, 3, "flu", ""}, "10022000", "influenza"}}}};
    std::ostringstream t;
    WriteTermPredictions(t, "lex", terms);
    WriteFile(dir / "t.jsonl", t.str());
    CHECK(ReadTermPredictions((dir / "t.jsonl").string()) == terms);

    WriteFile(dir / "o.jsonl", R"({"id": "a", "spans": [{"start": 0, "end": 3}, {"start": 2, "end": 4}]})" "\n");
    CHECK(ThrownKind([&] { ReadSpanPredictions((dir / "o.jsonl").string()); }) == ErrorKind::kSchema);
  }
}

}  // namespace
}  // namespace stk
