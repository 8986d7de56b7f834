#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stk/toy_classifier.hpp"

namespace stk {

// A trained classifier plus what is needed to apply it: which task it was
// trained for, the class names in index order, and the feature scheme.
struct ToyModel {
  std::string task;                  // plain | joint | stance | bio
  std::string features = "tokens";   // tokens | bio-window
  std::string category;              // entity category for bio models
  std::string trained_with;          // single-line record of the run flags
  std::vector<std::string> labels;   // size K
  ModelParams params;

  bool operator==(const ToyModel&) const = default;
};

// Text format, version 1:
//
//   stk-toy-model 1
//   hash fnv1a64
//   task <task>
//   features <scheme>
//   category <name or ->
//   classes <K>
//   dim <D>
//   labels <name_0> ... <name_K-1>
//   trained-with <free text to end of line>
//   bias <b_0> ... <b_K-1>
//   row <k> <nnz> <j>:<w_kj> ...      (K lines, non-zero weights only)
//   end
//
// Reals are printed with 17 significant digits so a file round-trips
// bit-exactly.
void WriteModel(std::ostream& out, const ToyModel& model);
ToyModel ReadModel(std::istream& in);

void SaveModel(const std::string& path, const ToyModel& model);
ToyModel LoadModel(const std::string& path);

// "%.17g".
std::string FormatReal(double v);

}  // namespace stk
