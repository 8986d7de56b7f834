#include "stk/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stk/bio_tagger.hpp"
#include "stk/ensemble.hpp"
#include "stk/error.hpp"
#include "stk/joint_labels.hpp"
#include "stk/metrics.hpp"
#include "stk/model_file.hpp"
#include "stk/normalizer.hpp"
#include "stk/records.hpp"
#include "stk/report.hpp"
#include "stk/span_codec.hpp"
#include "stk/text_prep.hpp"
#include "stk/toy_classifier.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

using nlohmann::json;
using Flags = std::vector<std::pair<std::string, std::string>>;

struct Options {
  std::string input;
  std::string gold;
  std::vector<std::string> preds;
  std::string out;
  std::string model;
  std::string model_id;
  std::string task;
  std::string schema = "classify";
  std::string mode = "strict";
  std::string lang = "en";
  std::string spans;
  std::string priority;
  std::uint64_t seed = 0;
  int epochs = 10;
  double lr = 0.1;
  double l2 = 1e-4;
  std::size_t batch = 16;
  std::size_t dim = kDefaultDim;
  double max_dist = kDefaultMaxDistance;
};

// Every option of the subcommand with the value it ran with (explicit or
// default), in declaration order.
Flags CollectFlags(const CLI::App& app) {
  Flags flags;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    if (!value.empty()) flags.emplace_back("--" + opt->get_lnames().front(), value);
  }
  return flags;
}

std::string FlagsLine(const Flags& flags) {
  json j = json::object();
  for (const auto& [name, value] : flags) j[name] = value;
  return j.dump();
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write '" + path + "'");
  return out;
}

std::string ModelInput(const LabeledRecord& r) {
  const NormalizedText nt = NormalizeText(r.text, r.lang);
  return r.claim ? FormatClaimInput(*r.claim, nt.normalized) : nt.normalized;
}

const std::string& RequireLabel(const LabeledRecord& r) {
  if (!r.label) Fail(ErrorKind::kSchema, "record '" + r.id + "' has no label");
  return *r.label;
}

std::vector<std::string> JointClassNames() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kNumJointLabels; ++i) names.push_back(JointName(JointFromIndex(i)));
  return names;
}

std::vector<std::string> StanceClassNames() {
  return {std::string(StanceName(Stance::kAgainst)), std::string(StanceName(Stance::kNone)),
          std::string(StanceName(Stance::kFavor))};
}

std::vector<std::string> PremiseClassNames() {
  return {std::string(PremiseName(Premise::kP0)), std::string(PremiseName(Premise::kP1))};
}

// Projects a label onto the evaluated task: joint labels reduce to their
// stance or premise part; single-task labels pass through.
std::string TaskLabel(const std::string& label, const std::string& task) {
  if (task == "stance") {
    if (label.find('-') != std::string::npos) {
      return std::string(StanceName(ParseJoint(label).stance));
    }
    return std::string(StanceName(ParseStance(label)));
  }
  if (task == "premise") {
    if (label.find('-') != std::string::npos) {
      return std::string(PremiseName(ParseJoint(label).premise));
    }
    return std::string(PremiseName(ParsePremise(label)));
  }
  return label;
}

std::size_t CheckedDim(std::size_t dim) {
  if (dim == 0 || (dim & (dim - 1)) != 0 || dim > (std::size_t{1} << 24)) {
    Fail(ErrorKind::kUsage, "--dim must be a power of two up to 2^24");
  }
  return dim;
}

std::vector<std::size_t> ParsePriority(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) {
      Fail(ErrorKind::kUsage, "--priority expects comma-separated voter indices");
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- commands

int RunPreprocess(const Options& o, std::ostream& out) {
  const Schema schema = o.schema == "stance" ? Schema::kStance
                        : o.schema == "ner"  ? Schema::kNer
                        : o.schema == "norm" ? Schema::kNorm
                                             : Schema::kClassify;
  const auto records = ReadRecords(o.input, schema, {ParseLang(o.lang)});
  std::ofstream file = OpenOut(o.out);
  for (const LabeledRecord& r : records) {
    const NormalizedText nt = NormalizeText(r.text, r.lang);
    json offsets = json::array();
    for (const SourceRef& ref : nt.offset_map) offsets.push_back({ref.original, ref.width});
    json j = {{"id", r.id},
              {"lang", LangCode(r.lang)},
              {"original", r.text},
              {"text", nt.normalized},
              {"input", r.claim ? FormatClaimInput(*r.claim, nt.normalized) : nt.normalized},
              {"offsets", std::move(offsets)}};
    file << j.dump() << '\n';
  }
  out << "preprocessed " << records.size() << " records\n";
  return kExitOk;
}

int RunTrain(const Options& o, const Flags& flags, std::ostream& out) {
  const ReadOptions read{ParseLang(o.lang)};
  if (o.task == "norm") {
    const auto records = ReadRecords(o.input, Schema::kNorm, read);
    std::vector<MentionPair> pairs;
    for (const LabeledRecord& r : records) {
      for (const TermSpan& t : *r.terms) pairs.push_back({t.span.text, {t.term_id, t.term_text}});
    }
    const Lexicon lex = Lexicon::Build(pairs);
    std::ofstream file = OpenOut(o.out);
    lex.Write(file);
    out << "built lexicon: " << lex.entries().size() << " surface forms from " << pairs.size()
        << " mentions\n";
    return kExitOk;
  }

  const std::size_t dim = CheckedDim(o.dim);
  ToyModel model;
  model.task = o.task;
  model.trained_with = FlagsLine(flags);
  std::vector<Example> examples;

  if (o.task == "plain") {
    const auto records = ReadRecords(o.input, Schema::kClassify, read);
    std::set<std::string> classes;
    for (const LabeledRecord& r : records) classes.insert(RequireLabel(r));
    model.labels.assign(classes.begin(), classes.end());
    for (const LabeledRecord& r : records) {
      const auto it = std::find(model.labels.begin(), model.labels.end(), *r.label);
      examples.push_back({Featurize(ModelInput(r), dim),
                          static_cast<std::size_t>(it - model.labels.begin())});
    }
  } else if (o.task == "joint" || o.task == "stance") {
    const auto records = ReadRecords(o.input, Schema::kStance, read);
    model.labels = o.task == "joint" ? JointClassNames() : StanceClassNames();
    for (const LabeledRecord& r : records) {
      const JointLabel j = ParseJoint(RequireLabel(r));
      examples.push_back({Featurize(ModelInput(r), dim),
                          o.task == "joint" ? JointIndex(j) : static_cast<std::size_t>(j.stance)});
    }
  } else {  // bio
    const auto records = ReadRecords(o.input, Schema::kNer, read);
    model.features = std::string(kBioWindowFeatures);
    model.labels = {"B", "I", "O"};
    std::set<std::string> categories;
    for (const LabeledRecord& r : records) {
      for (const Span& s : *r.spans) {
        if (!s.category.empty()) categories.insert(s.category);
      }
    }
    if (categories.size() > 1) {
      Fail(ErrorKind::kSchema, "bio training expects a single entity category, found " +
                                   std::to_string(categories.size()));
    }
    model.category = categories.empty() ? "ENTITY" : *categories.begin();
    for (const LabeledRecord& r : records) {
      const NormalizedText nt = NormalizeText(r.text, r.lang);
      const std::vector<Token> tokens = Tokenize(nt.normalized);
      const std::vector<Span> aligned = ProjectSpansToTokens(*r.spans, tokens, nt);
      const std::vector<BioTag> tags = EncodeBio(tokens, aligned);
      std::vector<FeatureVector> features = TokenWindowFeatures(tokens, dim);
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        const std::size_t y = tags[t] == BioTag::kB ? kTagB : tags[t] == BioTag::kI ? kTagI : kTagO;
        examples.push_back({std::move(features[t]), y});
      }
    }
  }

  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.lr;
  cfg.seed = o.seed;
  cfg.l2 = o.l2;
  cfg.batch_size = o.batch;
  const TrainResult result = TrainTraced(examples, cfg, model.labels.size());
  model.params = result.params;
  SaveModel(o.out, model);
  out << "trained " << o.task << " model: " << model.labels.size() << " classes, "
      << examples.size() << " examples, final loss " << FormatReal(result.epoch_loss.back())
      << '\n';
  return kExitOk;
}

std::size_t Argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

int RunPredictNorm(const Options& o, std::ostream& out) {
  const Lexicon lex = Lexicon::Load(o.model);
  const auto records = ReadRecords(o.input, Schema::kClassify, {ParseLang(o.lang)});
  SpanMap pipeline_spans;
  if (!o.spans.empty()) {
    pipeline_spans = ReadSpanPredictions(o.spans);
    std::set<std::string> ids;
    for (const LabeledRecord& r : records) ids.insert(r.id);
    for (const auto& [id, spans] : pipeline_spans) {
      if (!ids.contains(id)) Fail(ErrorKind::kCoverage, "span prediction for unknown record '" + id + "'");
    }
  }

  TermMap predictions;
  std::size_t mentions = 0, normalized = 0;
  for (const LabeledRecord& r : records) {
    std::vector<Span> spans;
    if (!o.spans.empty()) {
      if (const auto it = pipeline_spans.find(r.id); it != pipeline_spans.end()) spans = it->second;
    } else if (r.terms) {
      for (const TermSpan& t : *r.terms) spans.push_back(t.span);
    } else if (r.spans) {
      spans = *r.spans;
    } else {
      Fail(ErrorKind::kSchema, "record '" + r.id + "' has no terms or spans to normalize");
    }
    const std::u32string text = utf8::Decode(r.text);
    std::vector<TermSpan>& terms = predictions[r.id];
    for (Span s : spans) {
      if (s.start >= s.end || s.end > text.size()) {
        Fail(ErrorKind::kSchema, "span outside the text of record '" + r.id + "'");
      }
      s.text = utf8::Encode(std::u32string_view(text).substr(s.start, s.end - s.start));
      ++mentions;
      if (const auto term = NormalizeMention(s.text, lex, o.max_dist)) {
        ++normalized;
        terms.push_back(TermSpan{s, term->id, term->text});
      }
    }
  }
  std::ofstream file = OpenOut(o.out);
  WriteTermPredictions(file, o.model_id.empty() ? "lexicon" : o.model_id, predictions);
  out << "normalized " << normalized << " of " << mentions << " mentions ("
      << (o.spans.empty() ? "oracle" : "pipeline") << " spans)\n";
  return kExitOk;
}

int RunPredict(const Options& o, std::ostream& out) {
  if (o.task == "norm") return RunPredictNorm(o, out);

  const ToyModel model = LoadModel(o.model);
  const std::string model_id =
      o.model_id.empty() ? std::filesystem::path(o.model).stem().string() : o.model_id;
  const auto records = ReadRecords(o.input, Schema::kClassify, {ParseLang(o.lang)});
  std::ofstream file = OpenOut(o.out);

  if (model.task == "bio") {
    if (!o.task.empty() && o.task != "bio") {
      Fail(ErrorKind::kUsage, "a bio model only supports --task bio");
    }
    SpanMap spans;
    std::size_t total = 0;
    for (const LabeledRecord& r : records) {
      spans[r.id] = TagSpans(model, r.text, r.lang);
      total += spans[r.id].size();
    }
    WriteSpanPredictions(file, model_id, spans);
    out << "tagged " << records.size() << " records, " << total << " spans\n";
    return kExitOk;
  }

  const std::string task = o.task.empty() ? model.task : o.task;
  const bool joint = model.task == "joint";
  if (joint ? (task != "joint" && task != "stance" && task != "premise") : task != model.task) {
    Fail(ErrorKind::kUsage, "a " + model.task + " model cannot predict --task " + task);
  }

  std::vector<LabelPrediction> predictions;
  for (const LabeledRecord& r : records) {
    std::vector<double> probs = PredictProba(model.params, Featurize(ModelInput(r), model.params.dim));
    LabelPrediction p{r.id, "", {}};
    if (joint && task != "joint") {
      const JointDistribution d(probs);
      const Task t = task == "stance" ? Task::kStance : Task::kPremise;
      p.label = Decide(d, t).name();
      if (t == Task::kStance) {
        const StanceMarginal m = MarginalizeStance(d);
        p.probs.assign(m.begin(), m.end());
      } else {
        const PremiseMarginal m = MarginalizePremise(d);
        p.probs.assign(m.begin(), m.end());
      }
    } else {
      p.label = model.labels[Argmax(probs)];
      p.probs = std::move(probs);
    }
    predictions.push_back(std::move(p));
  }
  WriteLabelPredictions(file, model_id, predictions);
  out << "predicted " << predictions.size() << " records (" << task << ")\n";
  return kExitOk;
}

std::vector<PredictionSet> ReadSets(const std::vector<std::string>& paths) {
  std::vector<PredictionSet> sets;
  for (const std::string& p : paths) sets.push_back(ReadLabelPredictions(p));
  return sets;
}

int RunEnsemble(const Options& o, std::ostream& out) {
  const std::vector<PredictionSet> sets = ReadSets(o.preds);
  const std::vector<std::size_t> priority = ParsePriority(o.priority);
  const PredictionSet ensemble = EnsemblePredictions(sets, priority);
  std::vector<LabelPrediction> rows;
  std::size_t unanimous = 0;
  for (const auto& [id, label] : ensemble.labels) {
    rows.push_back({id, label, {}});
    unanimous += std::all_of(sets.begin(), sets.end(),
                             [&](const PredictionSet& s) { return s.labels.at(id) == label; });
  }
  std::ofstream file = OpenOut(o.out);
  WriteLabelPredictions(file, ensemble.model_id, rows);
  out << "ensembled " << sets.size() << " models over " << rows.size() << " records ("
      << unanimous << " unanimous)\n";
  return kExitOk;
}

void Emit(const EvalReport& report, const Options& o, std::ostream& out) {
  if (!o.out.empty()) {
    std::ofstream file = OpenOut(o.out);
    report.WriteJsonLines(file);
  }
  report.WriteTable(out);
}

void AddClassificationRows(EvalReport& report, const std::string& scope,
                           const ConfusionMatrix& cm, bool per_class) {
  report.rows.push_back({scope, "micro", ClassificationMetrics(cm, Micro{}), std::nullopt});
  report.rows.push_back({scope, "macro", ClassificationMetrics(cm, Macro{}), std::nullopt});
  if (!per_class) return;
  for (const std::string& c : cm.classes) {
    report.rows.push_back({scope, "class:" + c, ClassificationMetrics(cm, PerClass{c}), std::nullopt});
  }
}

int RunEvalCls(const Options& o, const Flags& flags, std::ostream& out) {
  const std::string task = o.task.empty() ? "plain" : o.task;
  const auto gold_records = ReadRecords(o.gold, Schema::kClassify, {ParseLang(o.lang)});
  const PredictionSet pred_set = ReadLabelPredictions(o.preds.front());
  LabelMap gold, pred;
  std::map<std::string, std::string> claim_of;
  bool all_claims = !gold_records.empty();
  for (const LabeledRecord& r : gold_records) {
    gold[r.id] = TaskLabel(RequireLabel(r), task);
    if (r.claim) {
      claim_of[r.id] = *r.claim;
    } else {
      all_claims = false;
    }
  }
  for (const auto& [id, label] : pred_set.labels) pred[id] = TaskLabel(label, task);

  std::vector<std::string> classes;
  if (task == "stance") {
    classes = StanceClassNames();
  } else if (task == "premise") {
    classes = PremiseClassNames();
  } else {
    std::set<std::string> seen;
    for (const auto& [id, l] : gold) seen.insert(l);
    for (const auto& [id, l] : pred) seen.insert(l);
    classes.assign(seen.begin(), seen.end());
  }

  EvalReport report{"eval-cls", flags, {}, {}, std::nullopt};
  const ConfusionMatrix cm = Confusion(gold, pred, classes);
  AddClassificationRows(report, "overall", cm, true);
  report.confusions.emplace_back("overall", cm);
  if (all_claims) {
    std::map<std::string, std::pair<LabelMap, LabelMap>> by_claim;
    for (const auto& [id, claim] : claim_of) {
      by_claim[claim].first[id] = gold.at(id);
      by_claim[claim].second[id] = pred.at(id);
    }
    for (const auto& [claim, maps] : by_claim) {
      AddClassificationRows(report, "claim:" + claim,
                            Confusion(maps.first, maps.second, classes), false);
    }
  }
  Emit(report, o, out);
  return kExitOk;
}

void CheckPredIds(const std::set<std::string>& gold_ids, const auto& pred) {
  for (const auto& [id, v] : pred) {
    if (!gold_ids.contains(id)) Fail(ErrorKind::kCoverage, "prediction for unknown record '" + id + "'");
  }
}

int RunEvalNer(const Options& o, const Flags& flags, std::ostream& out) {
  const auto gold_records = ReadRecords(o.gold, Schema::kNer, {ParseLang(o.lang)});
  SpanMap gold;
  std::set<std::string> ids;
  for (const LabeledRecord& r : gold_records) {
    gold[r.id] = *r.spans;
    ids.insert(r.id);
  }
  const SpanMap pred = ReadSpanPredictions(o.preds.front());
  CheckPredIds(ids, pred);
  const MatchMode mode = ParseMatchMode(o.mode);
  const SpanScore score = SpanMetrics(gold, pred, mode);
  EvalReport report{"eval-ner", flags, {}, {}, std::nullopt};
  report.rows.push_back({"overall", MatchModeName(mode), score.metrics, score});
  Emit(report, o, out);
  return kExitOk;
}

int RunEvalNorm(const Options& o, const Flags& flags, std::ostream& out) {
  const auto gold_records = ReadRecords(o.gold, Schema::kNorm, {ParseLang(o.lang)});
  TermMap gold;
  std::set<std::string> ids;
  for (const LabeledRecord& r : gold_records) {
    gold[r.id] = *r.terms;
    ids.insert(r.id);
  }
  const TermMap pred = ReadTermPredictions(o.preds.front());
  CheckPredIds(ids, pred);
  const MatchMode mode = ParseMatchMode(o.mode);
  const SpanScore score = NormalizationMetrics(gold, pred, mode);
  EvalReport report{"eval-norm", flags, {}, {}, std::nullopt};
  report.rows.push_back({"overall", MatchModeName(mode), score.metrics, score});
  Emit(report, o, out);
  return kExitOk;
}

int RunAgreement(const Options& o, const Flags& flags, std::ostream& out) {
  const std::vector<PredictionSet> sets = ReadSets(o.preds);
  EvalReport report{"agreement", flags, {}, {}, ComputeAgreement(sets)};
  Emit(report, o, out);
  return kExitOk;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kDivergence: return kExitDivergence;
    case ErrorKind::kIo: return kExitIo;
    default: return kExitData;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preprocessing, toy training, ensembling and scoring for social-media NLP shared tasks", "stk"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> langs = {"en", "es"};
  auto add_lang = [&](CLI::App* sub) {
    sub->add_option("--lang", o.lang, "default language for records without one")
        ->check(CLI::IsMember(langs))
        ->capture_default_str();
  };

  auto* preprocess = app.add_subcommand("preprocess", "normalize usernames and URLs");
  preprocess->add_option("--input", o.input, "records file")->required();
  preprocess->add_option("--out", o.out, "normalized records file")->required();
  preprocess->add_option("--schema", o.schema, "record schema")
      ->check(CLI::IsMember({"classify", "stance", "ner", "norm"}))
      ->capture_default_str();
  add_lang(preprocess);

  auto* train = app.add_subcommand("train", "train a toy model or build a lexicon");
  train->add_option("--input", o.input, "training records")->required();
  train->add_option("--out", o.out, "model (or lexicon) file")->required();
  train->add_option("--task", o.task, "plain | joint | stance | bio | norm")
      ->check(CLI::IsMember({"plain", "joint", "stance", "bio", "norm"}))
      ->required();
  train->add_option("--seed", o.seed, "shuffling seed")->capture_default_str();
  train->add_option("--epochs", o.epochs, "passes over the training data")->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--lr", o.lr, "learning rate")->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--l2", o.l2, "weight decay")->check(CLI::NonNegativeNumber)->capture_default_str();
  train->add_option("--batch", o.batch, "mini-batch size, 0 = full batch")->capture_default_str();
  train->add_option("--dim", o.dim, "hashed feature dimension (power of two)")->capture_default_str();
  add_lang(train);

  auto* predict = app.add_subcommand("predict", "apply a model (or lexicon) to records");
  predict->add_option("--input", o.input, "records")->required();
  predict->add_option("--model", o.model, "model or lexicon file")->required();
  predict->add_option("--out", o.out, "prediction file")->required();
  predict->add_option("--task", o.task, "joint | stance | premise | plain | bio | norm")
      ->check(CLI::IsMember({"plain", "joint", "stance", "premise", "bio", "norm"}));
  predict->add_option("--model-id", o.model_id, "model id written to the predictions");
  predict->add_option("--spans", o.spans, "norm: span predictions to normalize instead of gold spans");
  predict->add_option("--max-dist", o.max_dist, "norm: fuzzy-match threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_lang(predict);

  auto* ensemble = app.add_subcommand("ensemble", "majority vote over prediction files");
  ensemble->add_option("--pred", o.preds, "prediction file (repeat)")->required()->expected(2, -1);
  ensemble->add_option("--out", o.out, "ensembled prediction file")->required();
  ensemble->add_option("--priority", o.priority, "tie-break order of voters, e.g. 1,0,2");

  auto* eval_cls = app.add_subcommand("eval-cls", "classification P/R/F1 and confusion matrix");
  eval_cls->add_option("--gold", o.gold, "gold records")->required();
  eval_cls->add_option("--pred", o.preds, "prediction file")->required()->expected(1);
  eval_cls->add_option("--task", o.task, "plain | stance | premise")
      ->check(CLI::IsMember({"plain", "stance", "premise"}));
  eval_cls->add_option("--out", o.out, "report (line-delimited JSON)");
  add_lang(eval_cls);

  auto* eval_ner = app.add_subcommand("eval-ner", "span P/R/F1");
  eval_ner->add_option("--gold", o.gold, "gold records with spans")->required();
  eval_ner->add_option("--pred", o.preds, "span prediction file")->required()->expected(1);
  eval_ner->add_option("--mode", o.mode, "strict | relaxed")
      ->check(CLI::IsMember({"strict", "relaxed"}))
      ->capture_default_str();
  eval_ner->add_option("--out", o.out, "report (line-delimited JSON)");
  add_lang(eval_ner);

  auto* eval_norm = app.add_subcommand("eval-norm", "normalization P/R/F1");
  eval_norm->add_option("--gold", o.gold, "gold records with terms")->required();
  eval_norm->add_option("--pred", o.preds, "term prediction file")->required()->expected(1);
  eval_norm->add_option("--mode", o.mode, "strict | relaxed")
      ->check(CLI::IsMember({"strict", "relaxed"}))
      ->capture_default_str();
  eval_norm->add_option("--out", o.out, "report (line-delimited JSON)");
  add_lang(eval_norm);

  auto* agreement = app.add_subcommand("agreement", "pairwise Cohen's kappa between models");
  agreement->add_option("--pred", o.preds, "prediction file (repeat)")->required()->expected(2, -1);
  agreement->add_option("--out", o.out, "report (line-delimited JSON)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (preprocess->parsed()) return RunPreprocess(o, out);
    if (train->parsed()) return RunTrain(o, CollectFlags(*train), out);
    if (predict->parsed()) return RunPredict(o, out);
    if (ensemble->parsed()) return RunEnsemble(o, out);
    if (eval_cls->parsed()) return RunEvalCls(o, CollectFlags(*eval_cls), out);
    if (eval_ner->parsed()) return RunEvalNer(o, CollectFlags(*eval_ner), out);
    if (eval_norm->parsed()) return RunEvalNorm(o, CollectFlags(*eval_norm), out);
    if (agreement->parsed()) return RunAgreement(o, CollectFlags(*agreement), out);
  } catch (const Error& e) {
    err << "stk: " << ErrorKindName(e.kind()) << " error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "stk: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace stk
