#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace stk {

struct Term {
  std::string id;
  std::string text;

  bool operator==(const Term&) const = default;
};

struct MentionPair {
  std::string mention;
  Term term;
};

inline constexpr double kDefaultMaxDistance = 0.25;

// Lowercased, whitespace-collapsed, trimmed.
std::string NormalizeSurface(std::string_view mention);

// Levenshtein distance over code points divided by the longer length.
double NormalizedEditDistance(std::string_view a, std::string_view b);

// Surface form -> term lookup table, immutable once built.
class Lexicon {
 public:
  // Keys are NormalizeSurface(mention). A key seen with several terms keeps
  // the most frequent one; frequency ties go to the smaller term id. Throws
  // kInvalidArgument on empty input or a mention that normalizes to "".
  static Lexicon Build(std::span<const MentionPair> pairs);

  // Line-delimited "surface<TAB>term_id<TAB>term_text", sorted by surface.
  void Write(std::ostream& out) const;
  static Lexicon Read(std::istream& in);
  void Save(const std::string& path) const;
  static Lexicon Load(const std::string& path);

  const std::map<std::string, Term>& entries() const { return entries_; }

 private:
  std::map<std::string, Term> entries_;
};

// Exact match on the normalized mention, else the nearest key by normalized
// edit distance if it is within max_distance (ties: smallest key). Throws
// kInvalidArgument unless 0 <= max_distance <= 1.
std::optional<Term> NormalizeMention(std::string_view mention, const Lexicon& lex,
                                     double max_distance = kDefaultMaxDistance);

}  // namespace stk
