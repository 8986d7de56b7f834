#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

// The stance x premise joint label space and its marginalization back to the
// two single-task label spaces.
//
// Joint layout is stance-major, premise-minor, argumentative first:
//   0 Against-1  1 Against-0  2 None-1  3 None-0  4 Favor-1  5 Favor-0
namespace stk {

enum class Stance { kAgainst = 0, kNone = 1, kFavor = 2 };
enum class Premise { kP0 = 0, kP1 = 1 };

inline constexpr std::size_t kNumStances = 3;
inline constexpr std::size_t kNumPremises = 2;
inline constexpr std::size_t kNumJointLabels = 6;

struct JointLabel {
  Stance stance = Stance::kAgainst;
  Premise premise = Premise::kP1;

  bool operator==(const JointLabel&) const = default;
};

std::size_t JointIndex(JointLabel label);
JointLabel JointFromIndex(std::size_t index);

// "Against" / "None" / "Favor", "0" / "1", "Against-1" ...
std::string_view StanceName(Stance stance);
std::string_view PremiseName(Premise premise);
std::string JointName(JointLabel label);
Stance ParseStance(std::string_view name);
Premise ParsePremise(std::string_view name);
JointLabel ParseJoint(std::string_view name);

// Marginals indexed by the enum value: stance[Against, None, Favor],
// premise[P0, P1].
using StanceMarginal = std::array<double, kNumStances>;
using PremiseMarginal = std::array<double, kNumPremises>;

// Probability vector over the six joint labels. Construction validates that
// entries are finite, non-negative and sum to 1 within 1e-9.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit JointDistribution(std::span<const double> probs);

  const std::array<double, kNumJointLabels>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::array<double, kNumJointLabels> probs_{};
};

StanceMarginal MarginalizeStance(const JointDistribution& d);
PremiseMarginal MarginalizePremise(const JointDistribution& d);

enum class Task { kStance, kPremise };

// Argmax of the task marginal; ties go to the label that comes first in the
// enum order (Against < None < Favor, P0 < P1).
struct Decision {
  Task task;
  std::size_t index;  // Stance or Premise enum value

  Stance stance() const { return static_cast<Stance>(index); }
  Premise premise() const { return static_cast<Premise>(index); }
  std::string name() const;
};

Decision Decide(const JointDistribution& d, Task task);

// Same arithmetic on arbitrary non-negative finite weights (no sum
// constraint). Decide(d) == DecideWeights(c * d) for any c > 0.
StanceMarginal MarginalizeStanceWeights(std::span<const double, kNumJointLabels> w);
PremiseMarginal MarginalizePremiseWeights(std::span<const double, kNumJointLabels> w);
Decision DecideWeights(std::span<const double, kNumJointLabels> w, Task task);

}  // namespace stk
