#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stk/metrics.hpp"

namespace stk {

struct MetricRow {
  std::string scope;   // "overall", "claim:face masks", ...
  std::string kind;    // "micro", "macro", "class:Pers", "strict", "relaxed"
  Metrics metrics;
  std::optional<SpanScore> counts;
};

// Result of one evaluation run, rendered either as an aligned text table or
// as line-delimited JSON:
//   {"type":"run","command":...,"flags":{...}}
//   {"type":"metrics","scope":...,"kind":...,"precision":...,...}
//   {"type":"confusion","scope":...,"classes":[...],"counts":[[...]]}
//   {"type":"agreement","models":[...],"kappas":[[...]]}
struct EvalReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;
  std::vector<MetricRow> rows;
  std::vector<std::pair<std::string, ConfusionMatrix>> confusions;
  std::optional<AgreementMatrix> agreement;

  void WriteJsonLines(std::ostream& out) const;
  void WriteTable(std::ostream& out) const;
};

}  // namespace stk
