#include "stk/metrics.hpp"

#include <algorithm>
#include <set>

#include "stk/error.hpp"

namespace stk {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void CheckSameIds(const LabelMap& a, const LabelMap& b, std::string_view what) {
  std::string missing;
  std::size_t n = 0;
  auto note = [&](const std::string& id) {
    if (n++ < 10) missing += (missing.empty() ? "" : ", ") + id;
  };
  for (const auto& [id, label] : a) {
    if (!b.contains(id)) note(id);
  }
  for (const auto& [id, label] : b) {
    if (!a.contains(id)) note(id);
  }
  if (n > 0) {
    if (n > 10) missing += ", ... (" + std::to_string(n) + " in total)";
    Fail(ErrorKind::kCoverage,
         std::string(what) + ": records present on only one side: " + missing);
  }
}

template <typename T, typename SpanOf>
std::vector<T> SortedChecked(const std::vector<T>& items, SpanOf span_of,
                             const std::string& record) {
  std::vector<T> sorted = items;
  std::sort(sorted.begin(), sorted.end(), [&](const T& a, const T& b) {
    const Span& x = span_of(a);
    const Span& y = span_of(b);
    return x.start != y.start ? x.start < y.start : x.end < y.end;
  });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Span& s = span_of(sorted[i]);
    if (s.start >= s.end) {
      Fail(ErrorKind::kInvalidArgument, "empty span in record '" + record + "'");
    }
    if (i > 0 && Overlaps(span_of(sorted[i - 1]), s)) {
      Fail(ErrorKind::kInvalidArgument,
           "overlapping spans in record '" + record + "'");
    }
  }
  return sorted;
}

bool SpansMatch(const Span& g, const Span& p, MatchMode mode) {
  return mode == MatchMode::kStrict ? g.start == p.start && g.end == p.end
                                    : Overlaps(g, p);
}

// Both inputs sorted and internally non-overlapping. For such interval sets
// the leftmost-first scan is a maximum matching: whenever the current gold
// and prediction match, every other candidate of the one that ends first
// lies behind the other's scan position, so pairing them is never worse.
std::size_t GreedyMatches(const std::vector<Span>& gold,
                          const std::vector<Span>& pred, MatchMode mode) {
  std::size_t i = 0, j = 0, tp = 0;
  while (i < gold.size() && j < pred.size()) {
    if (SpansMatch(gold[i], pred[j], mode)) {
      ++tp;
      ++i;
      ++j;
    } else if (std::pair(gold[i].end, gold[i].start) <
               std::pair(pred[j].end, pred[j].start)) {
      ++i;
    } else {
      ++j;
    }
  }
  return tp;
}

// Kuhn's augmenting paths; record-level sizes are small.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::vector<std::vector<std::size_t>> adjacency,
                            std::size_t right_size)
      : adj_(std::move(adjacency)), match_right_(right_size, kNone) {}

  std::size_t Solve() {
    std::size_t matched = 0;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      visited_.assign(match_right_.size(), false);
      matched += Augment(u);
    }
    return matched;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool Augment(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      if (visited_[v]) continue;
      visited_[v] = true;
      if (match_right_[v] == kNone || Augment(match_right_[v])) {
        match_right_[v] = u;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_right_;
  std::vector<bool> visited_;
};

template <typename Map>
std::set<std::string> AllIds(const Map& a, const Map& b) {
  std::set<std::string> ids;
  for (const auto& [id, v] : a) ids.insert(id);
  for (const auto& [id, v] : b) ids.insert(id);
  return ids;
}

}  // namespace

Metrics MetricsFromCounts(std::size_t tp, std::size_t n_pred, std::size_t n_gold) {
  return Metrics{Ratio(tp, n_pred), Ratio(tp, n_gold), Ratio(2 * tp, n_pred + n_gold)};
}

std::size_t ConfusionMatrix::IndexOf(std::string_view label) const {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) {
    Fail(ErrorKind::kUnknownLabel, "label '" + std::string(label) + "' is not a known class");
  }
  return static_cast<std::size_t>(it - classes.begin());
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (std::size_t c : row) n += c;
  }
  return n;
}

ConfusionMatrix Confusion(const LabelMap& gold, const LabelMap& pred,
                          std::span<const std::string> classes) {
  CheckSameIds(gold, pred, "confusion matrix");
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  if (std::set<std::string>(cm.classes.begin(), cm.classes.end()).size() !=
      cm.classes.size()) {
    Fail(ErrorKind::kInvalidArgument, "duplicate class names");
  }
  cm.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  for (const auto& [id, g] : gold) {
    ++cm.counts[cm.IndexOf(g)][cm.IndexOf(pred.at(id))];
  }
  return cm;
}

Metrics ClassificationMetrics(const ConfusionMatrix& cm, const Averaging& mode) {
  const std::size_t n = cm.classes.size();
  auto per_class = [&](std::size_t c) {
    std::size_t predicted = 0, actual = 0;
    for (std::size_t i = 0; i < n; ++i) {
      predicted += cm.counts[i][c];
      actual += cm.counts[c][i];
    }
    return MetricsFromCounts(cm.counts[c][c], predicted, actual);
  };

  if (const auto* pc = std::get_if<PerClass>(&mode)) {
    return per_class(cm.IndexOf(pc->label));
  }
  if (std::holds_alternative<Micro>(mode)) {
    // Single-label: every record is one prediction and one gold label.
    std::size_t correct = 0;
    for (std::size_t c = 0; c < n; ++c) correct += cm.counts[c][c];
    const std::size_t total = cm.total();
    return MetricsFromCounts(correct, total, total);
  }
  Metrics sum;
  if (n == 0) return sum;
  for (std::size_t c = 0; c < n; ++c) {
    const Metrics m = per_class(c);
    sum.precision += m.precision;
    sum.recall += m.recall;
    sum.f1 += m.f1;
  }
  const double inv = 1.0 / static_cast<double>(n);
  return Metrics{sum.precision * inv, sum.recall * inv, sum.f1 * inv};
}

double CohensKappa(const LabelMap& a, const LabelMap& b) {
  CheckSameIds(a, b, "kappa");
  if (a.empty()) Fail(ErrorKind::kInvalidArgument, "kappa needs at least one record");

  std::map<std::string, std::size_t> count_a, count_b;
  std::size_t agree = 0;
  for (const auto& [id, la] : a) {
    const std::string& lb = b.at(id);
    agree += la == lb;
    ++count_a[la];
    ++count_b[lb];
  }
  const double n = static_cast<double>(a.size());
  const double observed = static_cast<double>(agree) / n;
  if (agree == a.size()) return 1.0;

  double expected = 0.0;
  for (const auto& [label, ca] : count_a) {
    const auto it = count_b.find(label);
    if (it != count_b.end()) {
      expected += (static_cast<double>(ca) / n) * (static_cast<double>(it->second) / n);
    }
  }
  if (expected >= 1.0 - 1e-12) {
    Fail(ErrorKind::kDegenerateMarginals,
         "kappa undefined: chance agreement is 1 but observed agreement is not");
  }
  return (observed - expected) / (1.0 - expected);
}

AgreementMatrix ComputeAgreement(std::span<const PredictionSet> sets) {
  if (sets.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "agreement needs at least two prediction sets");
  }
  AgreementMatrix m;
  const std::size_t n = sets.size();
  m.kappas.assign(n, std::vector<double>(n, 1.0));
  for (const PredictionSet& s : sets) m.model_ids.push_back(s.model_id);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.kappas[i][j] = m.kappas[j][i] = CohensKappa(sets[i].labels, sets[j].labels);
    }
  }
  return m;
}

const char* MatchModeName(MatchMode mode) {
  return mode == MatchMode::kStrict ? "strict" : "relaxed";
}

MatchMode ParseMatchMode(std::string_view name) {
  if (name == "strict") return MatchMode::kStrict;
  if (name == "relaxed") return MatchMode::kRelaxed;
  Fail(ErrorKind::kInvalidArgument,
       "unknown match mode '" + std::string(name) + "' (expected strict or relaxed)");
}

SpanScore SpanMetrics(const SpanMap& gold, const SpanMap& pred, MatchMode mode) {
  static const std::vector<Span> kNoSpans;
  const auto identity = [](const Span& s) -> const Span& { return s; };
  SpanScore score;
  for (const std::string& id : AllIds(gold, pred)) {
    const auto g_it = gold.find(id);
    const auto p_it = pred.find(id);
    const auto g = SortedChecked(g_it == gold.end() ? kNoSpans : g_it->second, identity, id);
    const auto p = SortedChecked(p_it == pred.end() ? kNoSpans : p_it->second, identity, id);
    score.true_positives += GreedyMatches(g, p, mode);
    score.num_gold += g.size();
    score.num_pred += p.size();
  }
  score.metrics = MetricsFromCounts(score.true_positives, score.num_pred, score.num_gold);
  return score;
}

SpanScore NormalizationMetrics(const TermMap& gold, const TermMap& pred,
                               MatchMode mode) {
  static const std::vector<TermSpan> kNoTerms;
  const auto span_of = [](const TermSpan& t) -> const Span& { return t.span; };
  SpanScore score;
  for (const std::string& id : AllIds(gold, pred)) {
    const auto g_it = gold.find(id);
    const auto p_it = pred.find(id);
    const auto g = SortedChecked(g_it == gold.end() ? kNoTerms : g_it->second, span_of, id);
    const auto p = SortedChecked(p_it == pred.end() ? kNoTerms : p_it->second, span_of, id);
    std::vector<std::vector<std::size_t>> adjacency(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (p[i].term_id == g[j].term_id && SpansMatch(g[j].span, p[i].span, mode)) {
          adjacency[i].push_back(j);
        }
      }
    }
    score.true_positives += BipartiteMatcher(std::move(adjacency), g.size()).Solve();
    score.num_gold += g.size();
    score.num_pred += p.size();
  }
  score.metrics = MetricsFromCounts(score.true_positives, score.num_pred, score.num_gold);
  return score;
}

}  // namespace stk
