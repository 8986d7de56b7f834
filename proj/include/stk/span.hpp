#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace stk {

// Half-open character interval [start, end) over a text, in code points.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  std::string category;

  bool operator==(const Span&) const = default;
};

inline bool Overlaps(const Span& a, const Span& b) {
  return a.start < b.end && b.start < a.end;
}

}  // namespace stk
