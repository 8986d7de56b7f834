// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. argv[1] is the path of the stk binary, used for the
// determinism check that drives the real executable twice.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stk/cli.hpp"
#include "stk/ensemble.hpp"
#include "stk/joint_labels.hpp"
#include "stk/metrics.hpp"
#include "stk/records.hpp"
#include "stk/span_codec.hpp"
#include "stk/utf8.hpp"
#include "support/finite_diff.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"
#include "support/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stk;

// Tolerances and sizes of the criteria.
constexpr int kMetricInstances = 1000;       // >= 200 required
constexpr int kSpanInstances = 1000;         // >= 200 required
constexpr double kOracleSeconds = 5.0;
constexpr double kKappaTolerance = 1e-12;
constexpr int kJointCases = 1000;
constexpr double kConservationTolerance = 1e-12;
constexpr int kBioCases = 1000;
constexpr int kGradInstances = 50;
constexpr double kGradTolerance = 1e-4;
constexpr std::size_t kPipelineRecords = 2000;
constexpr double kPipelineMinF1 = 0.95;
constexpr double kPipelineSeconds = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(double v, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ------------------------------------------------------------- criteria

Outcome MetricOracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  for (int i = 0; i < kMetricInstances && o.pass; ++i) {
    const auto inst = testing::RandomClassification(rng);
    const ConfusionMatrix cm = Confusion(inst.gold, inst.pred, inst.classes);
    for (std::size_t g = 0; g < inst.classes.size(); ++g) {
      for (std::size_t p = 0; p < inst.classes.size(); ++p) {
        o.Require(cm.counts[g][p] == oracle::CountPair(inst.lists, inst.classes[g], inst.classes[p]),
                  "confusion count mismatch");
      }
    }
    o.Require(cm.total() == inst.lists.gold.size(), "confusion total");
    o.Require(testing::SameMetrics(ClassificationMetrics(cm, Micro{}), oracle::Micro(inst.lists, inst.classes)),
              "micro mismatch");
    o.Require(testing::SameMetrics(ClassificationMetrics(cm, Macro{}), oracle::Macro(inst.lists, inst.classes)),
              "macro mismatch");
    for (const auto& c : inst.classes) {
      o.Require(testing::SameMetrics(ClassificationMetrics(cm, PerClass{c}), oracle::PerClass(inst.lists, c)),
                "per-class mismatch");
    }
  }
  const double s = Seconds(t0);
  o.Require(s < kOracleSeconds, "too slow");
  if (o.pass) o.detail = std::to_string(kMetricInstances) + " datasets, " + Fmt(s, 3) + " s";
  return o;
}

Outcome SpanOracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  for (int i = 0; i < kSpanInstances && o.pass; ++i) {
    const auto inst = testing::RandomSpans(rng, false);
    const Metrics strict = SpanMetrics(inst.gold_spans, inst.pred_spans, MatchMode::kStrict).metrics;
    const Metrics relaxed = SpanMetrics(inst.gold_spans, inst.pred_spans, MatchMode::kRelaxed).metrics;
    o.Require(testing::SameMetrics(strict, testing::OracleSpanScore(inst, MatchMode::kStrict, false)),
              "strict mismatch at instance " + std::to_string(i));
    o.Require(testing::SameMetrics(relaxed, testing::OracleSpanScore(inst, MatchMode::kRelaxed, false)),
              "relaxed mismatch at instance " + std::to_string(i));
    o.Require(relaxed.f1 >= strict.f1, "relaxed below strict at instance " + std::to_string(i));
  }
  const double s = Seconds(t0);
  o.Require(s < kOracleSeconds, "too slow");
  if (o.pass) o.detail = std::to_string(kSpanInstances) + " datasets, " + Fmt(s, 3) + " s";
  return o;
}

LabelMap Labels(const std::vector<std::string>& values) {
  LabelMap m;
  for (std::size_t i = 0; i < values.size(); ++i) m["r" + std::to_string(i)] = values[i];
  return m;
}

Outcome KappaLaws() {
  Outcome o;
  const double zero = CohensKappa(Labels({"x", "x", "y", "y"}), Labels({"x", "y", "x", "y"}));
  const double half = CohensKappa(Labels({"x", "x", "x", "y"}), Labels({"x", "x", "y", "y"}));
  o.Require(std::abs(zero - 0.0) <= kKappaTolerance, "p_o = p_e case is " + Fmt(zero, 17));
  o.Require(std::abs(half - 0.5) <= kKappaTolerance, "0.5 case is " + Fmt(half, 17));

  std::mt19937_64 rng(3003);
  int checked = 0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const auto inst = testing::RandomClassification(rng);
    o.Require(CohensKappa(inst.gold, inst.gold) == 1.0, "kappa(a, a) != 1");
    double k = 0.0;
    try {
      k = CohensKappa(inst.gold, inst.pred);
    } catch (const Error& e) {
      o.Require(e.kind() == ErrorKind::kDegenerateMarginals, "unexpected error");
      continue;
    }
    ++checked;
    o.Require(std::abs(k - CohensKappa(inst.pred, inst.gold)) <= kKappaTolerance, "asymmetric");
    // Bijective relabelling applied to both sides: reverse the alphabet.
    LabelMap ga, pa;
    for (const auto& [id, l] : inst.gold) ga[id] = std::string(1, static_cast<char>('z' - (l[0] - 'a')));
    for (const auto& [id, l] : inst.pred) pa[id] = std::string(1, static_cast<char>('z' - (l[0] - 'a')));
    o.Require(std::abs(k - CohensKappa(ga, pa)) <= kKappaTolerance, "not relabelling invariant");
  }
  if (o.pass) o.detail = "0.0 and 0.5 cases exact to 1e-12, laws on " + std::to_string(checked) + " random pairs";
  return o;
}

Outcome JointConservation() {
  Outcome o;
  std::mt19937_64 rng(4004);
  double worst = 0.0;
  for (int i = 0; i < kJointCases && o.pass; ++i) {
    std::array<double, kNumJointLabels> w{};
    double total = 0.0;
    for (double& x : w) total += (x = testing::UniformReal(rng, 0.0, 1.0) * (testing::Uniform(rng, 0, 4) != 0));
    if (total == 0.0) w[0] = total = 1.0;
    for (double& x : w) x /= total;
    const JointDistribution d(w);
    double joint = 0.0, stance = 0.0, premise = 0.0;
    for (double x : d.probs()) joint += x;
    for (double x : MarginalizeStance(d)) stance += x;
    for (double x : MarginalizePremise(d)) premise += x;
    worst = std::max({worst, std::abs(stance - joint), std::abs(premise - joint)});

    const double c = std::exp(testing::UniformReal(rng, -20.0, 20.0));
    std::array<double, kNumJointLabels> scaled{};
    for (std::size_t k = 0; k < kNumJointLabels; ++k) scaled[k] = c * w[k];
    for (Task t : {Task::kStance, Task::kPremise}) {
      o.Require(Decide(d, t).index == DecideWeights(scaled, t).index, "decision changed under scaling");
    }
  }
  // Exact ties resolve identically at any power-of-two scale.
  const std::array<double, kNumJointLabels> tie = {0.25, 0.25, 0.25, 0.25, 0.0, 0.0};
  for (int e = -10; e <= 10; e += 5) {
    std::array<double, kNumJointLabels> scaled{};
    for (std::size_t k = 0; k < kNumJointLabels; ++k) scaled[k] = std::ldexp(tie[k], e);
    o.Require(DecideWeights(scaled, Task::kStance).stance() == Stance::kAgainst, "tie policy under scaling");
  }
  o.Require(worst <= kConservationTolerance, "conservation error " + std::to_string(worst));
  if (o.pass) o.detail = std::to_string(kJointCases) + " distributions, max error " + Fmt(worst, 17);
  return o;
}

Span MakeSpan(const std::string& text, std::size_t start, std::size_t end) {
  return Span{start, end, utf8::Slice(text, start, end), "ADE"};
}

Outcome BioRoundTrip() {
  Outcome o;
  std::mt19937_64 rng(5005);
  const std::vector<std::string> words = {"me", "duele", "la", "cabeza", ",", "fiebre", "!", "tos", "¿", "qué"};
  for (int i = 0; i < kBioCases && o.pass; ++i) {
    std::string text;
    for (std::size_t n = testing::Uniform(rng, 0, 16); n > 0; --n) {
      if (!text.empty() && testing::Uniform(rng, 0, 3) != 0) text += ' ';
      text += words[testing::Uniform(rng, 0, words.size() - 1)];
    }
    const auto tokens = Tokenize(text);
    std::vector<Span> spans;
    for (std::size_t t = 0; t < tokens.size();) {
      if (testing::Uniform(rng, 0, 2) == 0) {
        const std::size_t last = std::min(tokens.size() - 1, t + testing::Uniform(rng, 0, 3));
        spans.push_back(MakeSpan(text, tokens[t].start, tokens[last].end));
        t = last + 1;
      } else {
        ++t;
      }
    }
    o.Require(DecodeBio(tokens, EncodeBio(tokens, spans), text, "ADE") == spans,
              "round trip failed on '" + text + "'");
  }

  using Tags = std::vector<BioTag>;
  const std::string four = "a b c d";
  o.Require(DecodeBio(Tokenize(four), Tags{BioTag::kB, BioTag::kI, BioTag::kO, BioTag::kB}, four, "ADE") ==
                std::vector<Span>{MakeSpan(four, 0, 3), MakeSpan(four, 6, 7)},
            "[B, I, O, B] golden case");
  const std::string three = "x y z";
  o.Require(DecodeBio(Tokenize(three), Tags{BioTag::kO, BioTag::kI, BioTag::kI}, three, "ADE") ==
                std::vector<Span>{MakeSpan(three, 2, 5)},
            "[O, I, I] repair case");
  if (o.pass) o.detail = std::to_string(kBioCases) + " random span sets, repair goldens match";
  return o;
}

Outcome GradientCheck() {
  Outcome o;
  std::mt19937_64 rng(6006);
  double worst = 0.0;
  for (int i = 0; i < kGradInstances; ++i) {
    worst = std::max(worst, testing::MaxRelativeGradError(testing::RandomGradInstance(rng)));
  }
  o.Require(worst < kGradTolerance, "max relative error " + std::to_string(worst));
  if (o.pass) o.detail = std::to_string(kGradInstances) + " instances, max relative error " + Fmt(worst * 1e6, 3) + "e-6";
  return o;
}

// --------------------------------------------------- CLI-driven criteria

class Dir {
 public:
  explicit Dir(const std::string& name) : path_(fs::temp_directory_path() / ("stk_acceptance_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  std::string operator()(const std::string& file) const { return (path_ / file).string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  if (code != kExitOk) {
    std::string line;
    for (const auto& a : args) line += a + " ";
    throw std::runtime_error("stk " + line + "exited " + std::to_string(code) + ": " + err.str());
  }
}

json MetricsRow(const std::string& report, const std::string& scope, const std::string& kind) {
  std::ifstream in(report);
  for (std::string line; std::getline(in, line);) {
    const json j = json::parse(line);
    if (j["type"] == "metrics" && j["scope"] == scope && j["kind"] == kind) return j;
  }
  throw std::runtime_error("no " + scope + "/" + kind + " row in " + report);
}

double EvalF1(const Dir& d, const std::string& pred, const std::string& task) {
  const std::string report = d(pred + "." + task + ".report.jsonl");
  Cli({"eval-cls", "--gold", d("test.jsonl"), "--pred", d(pred), "--task", task, "--out", report});
  return MetricsRow(report, "overall", "macro")["f1"];
}

Outcome MultitaskPipeline() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Dir d("pipeline");
  const auto all = testing::JointCorpus(kPipelineRecords, 7007);
  const std::size_t cut = kPipelineRecords * 3 / 4;
  WriteRecords(d("train.jsonl"), {all.begin(), all.begin() + cut});
  WriteRecords(d("test.jsonl"), {all.begin() + cut, all.end()});

  double worst_single = 1.0, stance_f1 = 1.0, premise_f1 = 1.0;
  std::vector<std::string> stance_cmd = {"ensemble"};
  for (const std::string seed : {"11", "22", "33"}) {
    const std::string model = d("joint" + seed + ".txt");
    Cli({"train", "--input", d("train.jsonl"), "--out", model, "--task", "joint", "--seed", seed, "--epochs", "10"});
    for (const std::string task : {"stance", "premise"}) {
      const std::string pred = task + seed + ".jsonl";
      Cli({"predict", "--input", d("test.jsonl"), "--model", model, "--task", task, "--out", d(pred)});
      const double f1 = EvalF1(d, pred, task);
      (task == "stance" ? stance_f1 : premise_f1) = std::min(task == "stance" ? stance_f1 : premise_f1, f1);
      if (task == "stance") {
        worst_single = std::min(worst_single, f1);
        stance_cmd.insert(stance_cmd.end(), {"--pred", d(pred)});
      }
    }
  }
  stance_cmd.insert(stance_cmd.end(), {"--out", d("stance_ensemble.jsonl")});
  Cli(stance_cmd);
  const double ensemble_f1 = EvalF1(d, "stance_ensemble.jsonl", "stance");
  const double s = Seconds(t0);

  o.Require(stance_f1 >= kPipelineMinF1, "stance F1 " + Fmt(stance_f1));
  o.Require(premise_f1 >= kPipelineMinF1, "premise F1 " + Fmt(premise_f1));
  o.Require(ensemble_f1 >= worst_single, "ensemble " + Fmt(ensemble_f1) + " < worst single " + Fmt(worst_single));
  o.Require(s < kPipelineSeconds, "took " + Fmt(s, 1) + " s");
  o.detail = "min stance F1 " + Fmt(stance_f1) + ", min premise F1 " + Fmt(premise_f1) + ", ensemble " +
             Fmt(ensemble_f1) + " vs worst " + Fmt(worst_single) + ", " + Fmt(s, 1) + " s" +
             (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

// Drops every third predicted span and widens every fifth by one character
// where the text allows, so the pipeline input is guaranteed imperfect.
void DegradeSpans(const std::string& in_path, const std::string& out_path,
                  const std::vector<LabeledRecord>& records) {
  SpanMap spans = ReadSpanPredictions(in_path);
  std::map<std::string, std::size_t> length;
  for (const auto& r : records) length[r.id] = utf8::Length(r.text);
  std::size_t n = 0;
  for (auto& [id, list] : spans) {
    std::vector<Span> kept;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Span s = list[i];
      ++n;
      if (n % 3 == 0) continue;
      const bool room = i + 1 == list.size() ? s.end < length[id] : s.end < list[i + 1].start;
      if (n % 5 == 0 && room) ++s.end;
      kept.push_back(s);
    }
    list = kept;
  }
  std::ofstream out(out_path, std::ios::binary);
  WriteSpanPredictions(out, "degraded", spans);
}

Outcome OracleMode() {
  Outcome o;
  const Dir d("oracle");
  WriteRecords(d("train.jsonl"), testing::MentionCorpus(500, 8008));
  const auto test = testing::MentionCorpus(200, 8009);
  WriteRecords(d("test.jsonl"), test);

  Cli({"train", "--input", d("train.jsonl"), "--out", d("lexicon.tsv"), "--task", "norm"});
  Cli({"train", "--input", d("train.jsonl"), "--out", d("tagger.txt"), "--task", "bio", "--lang", "es"});
  Cli({"predict", "--input", d("test.jsonl"), "--model", d("tagger.txt"), "--out", d("spans.jsonl")});
  DegradeSpans(d("spans.jsonl"), d("degraded.jsonl"), test);

  auto norm_score = [&](const std::string& name, const std::vector<std::string>& extra) {
    std::vector<std::string> args = {"predict", "--input", d("test.jsonl"), "--model", d("lexicon.tsv"),
                                     "--task", "norm", "--out", d(name + ".jsonl")};
    args.insert(args.end(), extra.begin(), extra.end());
    Cli(args);
    Cli({"eval-norm", "--gold", d("test.jsonl"), "--pred", d(name + ".jsonl"), "--out", d(name + ".report.jsonl")});
    return MetricsRow(d(name + ".report.jsonl"), "overall", "strict");
  };
  const json oracle = norm_score("oracle", {});
  const json tagged = norm_score("tagged", {"--spans", d("spans.jsonl")});
  const json degraded = norm_score("degraded_terms", {"--spans", d("degraded.jsonl")});

  const double p = oracle["precision"], r = oracle["recall"], f = oracle["f1"];
  o.Require(p == r && r == f, "oracle P/R/F1 " + Fmt(p) + "/" + Fmt(r) + "/" + Fmt(f));
  o.Require(tagged["f1"].get<double>() <= f, "tagger pipeline above oracle");
  o.Require(degraded["f1"].get<double>() <= f, "degraded pipeline above oracle");
  o.Require(degraded["f1"].get<double>() < f, "degraded spans did not lower the score");
  o.detail = "oracle P=R=F1=" + Fmt(f) + ", pipeline F1 " + Fmt(tagged["f1"]) + " (tagger), " +
             Fmt(degraded["f1"]) + " (degraded spans)" + (o.pass ? "" : " (" + o.detail + ")");
  return o;
}

std::string Quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// The whole CLI pipeline as shell commands with relative paths, so two runs
// in different directories must write identical bytes.
bool RunScript(const std::string& stk, const fs::path& dir, std::string& failure) {
  const std::vector<std::string> steps = {
      "preprocess --input train.jsonl --out pre.jsonl --schema stance",
      "train --input train.jsonl --out m1.txt --task joint --seed 5 --epochs 4",
      "train --input train.jsonl --out m2.txt --task joint --seed 6 --epochs 4",
      "train --input train.jsonl --out m3.txt --task stance --seed 5 --epochs 4 --dim 1024",
      "predict --input test.jsonl --model m1.txt --task stance --out p1.jsonl",
      "predict --input test.jsonl --model m2.txt --task stance --out p2.jsonl",
      "predict --input test.jsonl --model m3.txt --out p3.jsonl",
      "ensemble --pred p1.jsonl --pred p2.jsonl --pred p3.jsonl --out ens.jsonl",
      "eval-cls --gold test.jsonl --pred ens.jsonl --task stance --out cls.report.jsonl",
      "agreement --pred p1.jsonl --pred p2.jsonl --pred p3.jsonl --out agree.report.jsonl",
      "train --input ner_train.jsonl --out tagger.txt --task bio --lang es --seed 3",
      "predict --input ner_test.jsonl --model tagger.txt --out spans.jsonl",
      "eval-ner --gold ner_test.jsonl --pred spans.jsonl --mode strict --out strict.report.jsonl",
      "eval-ner --gold ner_test.jsonl --pred spans.jsonl --mode relaxed --out relaxed.report.jsonl",
      "train --input ner_train.jsonl --out lexicon.tsv --task norm",
      "predict --input ner_test.jsonl --model lexicon.tsv --task norm --spans spans.jsonl --out terms.jsonl",
      "eval-norm --gold ner_test.jsonl --pred terms.jsonl --mode relaxed --out norm.report.jsonl",
  };
  for (const std::string& step : steps) {
    const std::string cmd = "cd " + Quote(dir.string()) + " && " + Quote(stk) + " " + step + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      failure = "command failed: stk " + step;
      return false;
    }
  }
  return true;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome Determinism(const std::string& stk) {
  Outcome o;
  if (stk.empty()) {
    o.Require(false, "no stk binary given");
    return o;
  }
  const Dir a("determinism_a"), b("determinism_b");
  for (const Dir* d : {&a, &b}) {
    WriteRecords((*d)("train.jsonl"), testing::JointCorpus(400, 9009));
    WriteRecords((*d)("test.jsonl"), testing::JointCorpus(100, 9010));
    WriteRecords((*d)("ner_train.jsonl"), testing::MentionCorpus(200, 9011));
    WriteRecords((*d)("ner_test.jsonl"), testing::MentionCorpus(60, 9012));
    std::string failure;
    if (!RunScript(fs::absolute(stk).string(), d->path(), failure)) {
      o.Require(false, failure);
      return o;
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a.path())) {
    const fs::path other = b.path() / entry.path().filename();
    ++files;
    o.Require(fs::exists(other) && Slurp(entry.path()) == Slurp(other),
              entry.path().filename().string() + " differs");
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(b.path())) ++files_b;
  o.Require(files == files_b, "different artifact sets");
  if (o.pass) o.detail = std::to_string(files) + " artifacts byte-identical across two runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string stk = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric-oracle-equivalence", MetricOracle},
      {"span-metric-oracle-equivalence", SpanOracle},
      {"kappa-laws", KappaLaws},
      {"joint-label-conservation", JointConservation},
      {"bio-round-trip", BioRoundTrip},
      {"gradient-check", GradientCheck},
      {"end-to-end-multitask-pipeline", MultitaskPipeline},
      {"oracle-mode-normalization", OracleMode},
      {"cli-determinism", [&] { return Determinism(stk); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
