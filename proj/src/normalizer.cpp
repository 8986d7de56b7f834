#include "stk/normalizer.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>
#include <vector>

#include "stk/error.hpp"
#include "stk/utf8.hpp"

namespace stk {
namespace {

std::size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

double NormalizedDistance(std::u32string_view a, std::u32string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(Levenshtein(a, b)) / static_cast<double>(longest);
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t tab = line.find('\t', begin);
    out.push_back(line.substr(begin, tab - begin));
    if (tab == std::string::npos) break;
    begin = tab + 1;
  }
  return out;
}

}  // namespace

std::string NormalizeSurface(std::string_view mention) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t cp : utf8::Decode(mention)) {
    if (utf8::IsSpace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(utf8::ToLower(cp));
  }
  return utf8::Encode(out);
}

double NormalizedEditDistance(std::string_view a, std::string_view b) {
  return NormalizedDistance(utf8::Decode(a), utf8::Decode(b));
}

Lexicon Lexicon::Build(std::span<const MentionPair> pairs) {
  if (pairs.empty()) Fail(ErrorKind::kInvalidArgument, "no mention/term pairs");
  // key -> (term id, term text) -> frequency
  std::map<std::string, std::map<std::pair<std::string, std::string>, std::size_t>> freq;
  for (const MentionPair& p : pairs) {
    std::string key = NormalizeSurface(p.mention);
    if (key.empty()) {
      Fail(ErrorKind::kInvalidArgument, "mention for term '" + p.term.id + "' is blank");
    }
    if (p.term.id.empty() || p.term.id.find_first_of("\t\r\n") != std::string::npos ||
        p.term.text.find_first_of("\t\r\n") != std::string::npos) {
      Fail(ErrorKind::kInvalidArgument,
           "term for mention '" + p.mention + "' has an empty id or a tab/newline");
    }
    ++freq[std::move(key)][{p.term.id, p.term.text}];
  }
  Lexicon lex;
  for (const auto& [key, terms] : freq) {
    // Map order is ascending by (id, text), so a strict > keeps the smallest
    // id among equally frequent terms.
    const std::pair<std::string, std::string>* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& [term, n] : terms) {
      if (n > best_n) {
        best = &term;
        best_n = n;
      }
    }
    lex.entries_.emplace(key, Term{best->first, best->second});
  }
  return lex;
}

void Lexicon::Write(std::ostream& out) const {
  for (const auto& [key, term] : entries_) {
    out << key << '\t' << term.id << '\t' << term.text << '\n';
  }
}

Lexicon Lexicon::Read(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = [&] { return "lexicon line " + std::to_string(line_no); };
    if (!utf8::IsValid(line)) Fail(ErrorKind::kParse, where() + ": invalid UTF-8");
    const std::vector<std::string> fields = SplitTabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      Fail(ErrorKind::kParse, where() + ": expected surface<TAB>term_id<TAB>term_text");
    }
    const std::string key = NormalizeSurface(fields[0]);
    if (!lex.entries_.emplace(key, Term{fields[1], fields[2]}).second) {
      Fail(ErrorKind::kIntegrity, where() + ": duplicate surface '" + key + "'");
    }
  }
  return lex;
}

void Lexicon::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write lexicon '" + path + "'");
  Write(out);
}

Lexicon Lexicon::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open lexicon '" + path + "'");
  return Read(in);
}

std::optional<Term> NormalizeMention(std::string_view mention, const Lexicon& lex,
                                     double max_distance) {
  if (!(max_distance >= 0.0 && max_distance <= 1.0)) {
    Fail(ErrorKind::kInvalidArgument, "max distance must lie in [0, 1]");
  }
  const std::string key = NormalizeSurface(mention);
  if (const auto it = lex.entries().find(key); it != lex.entries().end()) {
    return it->second;
  }
  const std::u32string query = utf8::Decode(key);
  const Term* best = nullptr;
  double best_distance = 0.0;
  for (const auto& [candidate, term] : lex.entries()) {
    const double d = NormalizedDistance(query, utf8::Decode(candidate));
    if (best == nullptr || d < best_distance) {
      best = &term;
      best_distance = d;
    }
  }
  if (best != nullptr && best_distance <= max_distance) return *best;
  return std::nullopt;
}

}  // namespace stk
