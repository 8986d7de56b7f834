#pragma once

#include <map>
#include <string>

namespace stk {

// record id -> class label
using LabelMap = std::map<std::string, std::string>;

struct PredictionSet {
  std::string model_id;
  LabelMap labels;

  bool operator==(const PredictionSet&) const = default;
};

}  // namespace stk
