#include "stk/joint_labels.hpp"

#include <cmath>

#include "stk/error.hpp"

namespace stk {
namespace {

// Premise position inside a stance block: "-1" precedes "-0".
std::size_t PremiseSlot(Premise p) { return p == Premise::kP1 ? 0 : 1; }
Premise PremiseFromSlot(std::size_t slot) {
  return slot == 0 ? Premise::kP1 : Premise::kP0;
}

void CheckWeights(std::span<const double> w) {
  if (w.size() != kNumJointLabels) {
    Fail(ErrorKind::kInvalidDistribution,
         "joint distribution needs 6 entries, got " + std::to_string(w.size()));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < 0.0) {
      Fail(ErrorKind::kInvalidDistribution,
           "joint entry " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

template <std::size_t N>
std::size_t FirstArgmax(const std::array<double, N>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::size_t JointIndex(JointLabel label) {
  return 2 * static_cast<std::size_t>(label.stance) + PremiseSlot(label.premise);
}

JointLabel JointFromIndex(std::size_t index) {
  if (index >= kNumJointLabels) {
    Fail(ErrorKind::kInvalidArgument,
         "joint index " + std::to_string(index) + " out of range");
  }
  return JointLabel{static_cast<Stance>(index / 2), PremiseFromSlot(index % 2)};
}

std::string_view StanceName(Stance stance) {
  switch (stance) {
    case Stance::kAgainst: return "Against";
    case Stance::kNone: return "None";
    case Stance::kFavor: return "Favor";
  }
  return "";
}

std::string_view PremiseName(Premise premise) {
  return premise == Premise::kP1 ? "1" : "0";
}

std::string JointName(JointLabel label) {
  std::string out(StanceName(label.stance));
  out += '-';
  out += PremiseName(label.premise);
  return out;
}

Stance ParseStance(std::string_view name) {
  if (name == "Against") return Stance::kAgainst;
  if (name == "None") return Stance::kNone;
  if (name == "Favor") return Stance::kFavor;
  Fail(ErrorKind::kUnknownLabel, "unknown stance label '" + std::string(name) + "'");
}

Premise ParsePremise(std::string_view name) {
  if (name == "0") return Premise::kP0;
  if (name == "1") return Premise::kP1;
  Fail(ErrorKind::kUnknownLabel, "unknown premise label '" + std::string(name) + "'");
}

JointLabel ParseJoint(std::string_view name) {
  const auto dash = name.rfind('-');
  if (dash == std::string_view::npos) {
    Fail(ErrorKind::kUnknownLabel, "unknown joint label '" + std::string(name) + "'");
  }
  return JointLabel{ParseStance(name.substr(0, dash)),
                    ParsePremise(name.substr(dash + 1))};
}

JointDistribution::JointDistribution(std::span<const double> probs) {
  CheckWeights(probs);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumJointLabels; ++i) {
    probs_[i] = probs[i];
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    Fail(ErrorKind::kInvalidDistribution,
         "joint distribution sums to " + std::to_string(sum));
  }
}

StanceMarginal MarginalizeStanceWeights(std::span<const double, kNumJointLabels> w) {
  CheckWeights(w);
  StanceMarginal out{};
  for (std::size_t s = 0; s < kNumStances; ++s) out[s] = w[2 * s] + w[2 * s + 1];
  return out;
}

PremiseMarginal MarginalizePremiseWeights(std::span<const double, kNumJointLabels> w) {
  CheckWeights(w);
  PremiseMarginal out{};
  for (std::size_t i = 0; i < kNumJointLabels; ++i) {
    out[static_cast<std::size_t>(PremiseFromSlot(i % 2))] += w[i];
  }
  return out;
}

StanceMarginal MarginalizeStance(const JointDistribution& d) {
  return MarginalizeStanceWeights(d.probs());
}

PremiseMarginal MarginalizePremise(const JointDistribution& d) {
  return MarginalizePremiseWeights(d.probs());
}

std::string Decision::name() const {
  return std::string(task == Task::kStance ? StanceName(stance())
                                           : PremiseName(premise()));
}

Decision DecideWeights(std::span<const double, kNumJointLabels> w, Task task) {
  if (task == Task::kStance) {
    return Decision{task, FirstArgmax(MarginalizeStanceWeights(w))};
  }
  return Decision{task, FirstArgmax(MarginalizePremiseWeights(w))};
}

Decision Decide(const JointDistribution& d, Task task) {
  return DecideWeights(d.probs(), task);
}

}  // namespace stk
