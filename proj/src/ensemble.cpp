#include "stk/ensemble.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "stk/error.hpp"

namespace stk {
namespace {

std::vector<std::size_t> ResolvePriority(std::span<const std::size_t> priority,
                                         std::size_t voters) {
  std::vector<std::size_t> order(voters);
  if (priority.empty()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }
  if (priority.size() != voters) {
    Fail(ErrorKind::kInvalidArgument,
         "priority lists " + std::to_string(priority.size()) + " voters, expected " +
             std::to_string(voters));
  }
  std::vector<bool> seen(voters, false);
  for (std::size_t i = 0; i < voters; ++i) {
    if (priority[i] >= voters || seen[priority[i]]) {
      Fail(ErrorKind::kInvalidArgument, "priority is not a permutation of voters");
    }
    seen[priority[i]] = true;
    order[i] = priority[i];
  }
  return order;
}

}  // namespace

std::string MajorityVote(std::span<const std::string> votes,
                         std::span<const std::size_t> priority) {
  if (votes.empty()) Fail(ErrorKind::kInvalidArgument, "no votes");
  const std::vector<std::size_t> order = ResolvePriority(priority, votes.size());

  std::map<std::string, std::size_t> counts;
  for (const std::string& v : votes) ++counts[v];
  std::size_t top = 0;
  for (const auto& [label, n] : counts) top = std::max(top, n);

  for (std::size_t voter : order) {
    if (counts[votes[voter]] == top) return votes[voter];
  }
  return votes[order.front()];  // unreachable: some voter holds a top label
}

PredictionSet EnsemblePredictions(std::span<const PredictionSet> sets,
                                  std::span<const std::size_t> priority) {
  if (sets.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "ensembling needs at least two prediction sets");
  }
  std::set<std::string> all_ids;
  for (const PredictionSet& s : sets) {
    for (const auto& [id, label] : s.labels) all_ids.insert(id);
  }
  std::string missing;
  for (const PredictionSet& s : sets) {
    for (const std::string& id : all_ids) {
      if (!s.labels.contains(id)) {
        missing += (missing.empty() ? "" : ", ") + s.model_id + ":" + id;
      }
    }
  }
  if (!missing.empty()) {
    Fail(ErrorKind::kCoverage, "prediction sets do not cover the same ids; missing " + missing);
  }

  PredictionSet out;
  out.model_id = "ensemble";
  std::vector<std::string> votes(sets.size());
  for (const std::string& id : all_ids) {
    for (std::size_t i = 0; i < sets.size(); ++i) votes[i] = sets[i].labels.at(id);
    out.labels.emplace(id, MajorityVote(votes, priority));
  }
  return out;
}

}  // namespace stk
