#include "stk/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace stk {
namespace {

using nlohmann::json;

std::string Fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string PadLeft(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string PadRight(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Row labels on the left, one right-aligned column per header.
void WriteGrid(std::ostream& out, const std::vector<std::string>& row_names,
               const std::vector<std::string>& col_names,
               const std::vector<std::vector<std::string>>& cells) {
  std::size_t label_w = 0;
  for (const auto& r : row_names) label_w = std::max(label_w, r.size());
  std::vector<std::size_t> col_w(col_names.size());
  for (std::size_t c = 0; c < col_names.size(); ++c) {
    col_w[c] = col_names[c].size();
    for (const auto& row : cells) col_w[c] = std::max(col_w[c], row[c].size());
  }
  out << PadRight("", label_w);
  for (std::size_t c = 0; c < col_names.size(); ++c) out << "  " << PadLeft(col_names[c], col_w[c]);
  out << '\n';
  for (std::size_t r = 0; r < row_names.size(); ++r) {
    out << PadRight(row_names[r], label_w);
    for (std::size_t c = 0; c < col_names.size(); ++c) out << "  " << PadLeft(cells[r][c], col_w[c]);
    out << '\n';
  }
}

}  // namespace

void EvalReport::WriteJsonLines(std::ostream& out) const {
  json run = {{"type", "run"}, {"command", command}, {"flags", json::object()}};
  for (const auto& [name, value] : flags) run["flags"][name] = value;
  out << run.dump() << '\n';

  for (const MetricRow& row : rows) {
    json j = {{"type", "metrics"},
              {"scope", row.scope},
              {"kind", row.kind},
              {"precision", row.metrics.precision},
              {"recall", row.metrics.recall},
              {"f1", row.metrics.f1}};
    if (row.counts) {
      j["tp"] = row.counts->true_positives;
      j["n_pred"] = row.counts->num_pred;
      j["n_gold"] = row.counts->num_gold;
    }
    out << j.dump() << '\n';
  }
  for (const auto& [scope, cm] : confusions) {
    out << json{{"type", "confusion"},
                {"scope", scope},
                {"classes", cm.classes},
                {"counts", cm.counts}}
               .dump()
        << '\n';
  }
  if (agreement) {
    out << json{{"type", "agreement"},
                {"models", agreement->model_ids},
                {"kappas", agreement->kappas}}
               .dump()
        << '\n';
  }
}

void EvalReport::WriteTable(std::ostream& out) const {
  out << command << '\n';
  for (const auto& [name, value] : flags) out << "  " << name << ' ' << value << '\n';

  if (!rows.empty()) {
    out << '\n';
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> cells;
    bool with_counts = false;
    for (const MetricRow& row : rows) with_counts |= row.counts.has_value();
    for (const MetricRow& row : rows) {
      names.push_back(row.scope + "  " + row.kind);
      std::vector<std::string> line = {Fixed(row.metrics.precision, 4),
                                       Fixed(row.metrics.recall, 4),
                                       Fixed(row.metrics.f1, 4)};
      if (with_counts) {
        line.push_back(row.counts ? std::to_string(row.counts->true_positives) : "");
        line.push_back(row.counts ? std::to_string(row.counts->num_pred) : "");
        line.push_back(row.counts ? std::to_string(row.counts->num_gold) : "");
      }
      cells.push_back(std::move(line));
    }
    std::vector<std::string> header = {"P", "R", "F1"};
    if (with_counts) header.insert(header.end(), {"TP", "#pred", "#gold"});
    WriteGrid(out, names, header, cells);
  }

  for (const auto& [scope, cm] : confusions) {
    out << "\nconfusion " << scope << " (rows gold, columns predicted)\n";
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : cm.counts) {
      std::vector<std::string> line;
      for (std::size_t c : row) line.push_back(std::to_string(c));
      cells.push_back(std::move(line));
    }
    WriteGrid(out, cm.classes, cm.classes, cells);
  }

  if (agreement) {
    out << "\nagreement (Cohen's kappa)\n";
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : agreement->kappas) {
      std::vector<std::string> line;
      for (double k : row) line.push_back(Fixed(k, 3));
      cells.push_back(std::move(line));
    }
    WriteGrid(out, agreement->model_ids, agreement->model_ids, cells);
  }
}

}  // namespace stk
