#include "fedrank/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <utility>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

constexpr double kPruneTolerance = 1e-12;

double entropy_of_probabilities(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy_of_counts(std::span<const int> counts, int total) {
  double h = 0.0;
  for (int c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

void require_problem(int num_types, int positions) {
  if (num_types < 1) throw InvalidInput("number of record types must be >= 1");
  if (positions < 1) throw InvalidInput("number of positions must be >= 1");
}

class BranchAndBound {
 public:
  BranchAndBound(int num_types, int positions, bool keep_trace)
      : num_types_(num_types), positions_(positions), keep_trace_(keep_trace) {}

  BnBResult solve() {
    std::vector<int> fixed;
    visit(fixed);
    BnBResult result;
    result.best.counts = best_;
    result.best.entropy = entropy_of_counts(best_, positions_);
    result.stats = stats_;
    result.trace = std::move(trace_);
    return result;
  }

 private:
  void visit(std::vector<int>& fixed) {
    const int used = std::accumulate(fixed.begin(), fixed.end(), 0);
    const int free_slots = num_types_ - static_cast<int>(fixed.size());
    const int residual = positions_ - used;

    BnBNode node;
    node.fixed = fixed;
    node.relaxation.reserve(num_types_);
    for (int c : fixed) node.relaxation.push_back(static_cast<double>(c) / positions_);
    const double share = static_cast<double>(residual) / (static_cast<double>(free_slots) * positions_);
    node.relaxation.insert(node.relaxation.end(), free_slots, share);
    node.relaxation_value = entropy_of_probabilities(node.relaxation);
    node.feasible = residual % free_slots == 0;
    node.incumbent_before = incumbent_;

    std::vector<int> key = fixed;
    std::sort(key.begin(), key.end());
    std::vector<int> completion;
    if (node.feasible) {
      completion = fixed;
      completion.insert(completion.end(), free_slots, residual / free_slots);
    }
    std::vector<int> sorted_completion = completion;
    std::sort(sorted_completion.begin(), sorted_completion.end());

    bool duplicate = !visited_.emplace(key, free_slots).second;
    if (node.feasible && evaluated_.count(sorted_completion) > 0) duplicate = true;

    ++stats_.nodes;
    if (duplicate) {
      node.outcome = NodeOutcome::PrunedDuplicate;
      ++stats_.pruned_duplicate;
    } else if (node.relaxation_value < incumbent_ - kPruneTolerance) {
      node.outcome = NodeOutcome::PrunedBound;
      ++stats_.pruned_bound;
    } else if (node.feasible) {
      node.outcome = NodeOutcome::ClosedFeasible;
      ++stats_.closed_feasible;
      evaluated_.insert(sorted_completion);
      if (best_.empty() || node.relaxation_value > incumbent_) {
        incumbent_ = node.relaxation_value;
        best_ = completion;
      }
    } else {
      node.outcome = NodeOutcome::Branched;
      ++stats_.branched;
    }
    node.incumbent_after = incumbent_;
    const NodeOutcome outcome = node.outcome;
    if (keep_trace_) trace_.push_back(std::move(node));

    if (outcome != NodeOutcome::Branched) return;
    for (int c = 0; c <= residual; ++c) {
      fixed.push_back(c);
      visit(fixed);
      fixed.pop_back();
    }
  }

  int num_types_;
  int positions_;
  bool keep_trace_;
  double incumbent_ = 0.0;
  std::vector<int> best_;
  std::set<std::pair<std::vector<int>, int>> visited_;
  std::set<std::vector<int>> evaluated_;
  BnBStats stats_;
  std::vector<BnBNode> trace_;
};

void add_stats(BnBStats& into, const BnBStats& from) {
  into.nodes += from.nodes;
  into.branched += from.branched;
  into.pruned_duplicate += from.pruned_duplicate;
  into.closed_feasible += from.closed_feasible;
  into.pruned_bound += from.pruned_bound;
}

}  // namespace

CountAllocation closed_form_allocation(int num_types, int positions) {
  require_problem(num_types, positions);
  const int base = positions / num_types;
  const int extra = positions % num_types;
  CountAllocation alloc;
  alloc.counts.assign(num_types - extra, base);
  alloc.counts.insert(alloc.counts.end(), extra, base + 1);
  alloc.entropy = entropy_of_counts(alloc.counts, positions);
  return alloc;
}

double ideal_cumulative_entropy(int num_types, int positions) {
  require_problem(num_types, positions);
  double sum = 0.0;
  for (int p = 1; p <= positions; ++p) sum += closed_form_allocation(num_types, p).entropy;
  return sum;
}

RelaxedSolution relaxation_optimum(std::span<const double> fixed, int num_types) {
  if (num_types < 1) throw InvalidInput("number of record types must be >= 1");
  if (fixed.size() >= static_cast<std::size_t>(num_types)) {
    throw InvalidInput("relaxation needs at least one free coordinate");
  }
  double mass = 0.0;
  for (double p : fixed) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("fixed probability outside [0, 1]");
    mass += p;
  }
  if (mass > 1.0 + kPruneTolerance) {
    throw InvalidInput("infeasible: fixed probabilities sum to more than 1");
  }
  const auto free_slots = static_cast<double>(num_types - fixed.size());
  RelaxedSolution sol;
  sol.probabilities.assign(fixed.begin(), fixed.end());
  sol.probabilities.insert(sol.probabilities.end(), num_types - fixed.size(),
                           std::max(0.0, 1.0 - mass) / free_slots);
  sol.entropy = entropy_of_probabilities(sol.probabilities);
  return sol;
}

std::string to_string(NodeOutcome outcome) {
  switch (outcome) {
    case NodeOutcome::Branched: return "branch";
    case NodeOutcome::PrunedDuplicate: return "duplicate";
    case NodeOutcome::ClosedFeasible: return "feasible";
    case NodeOutcome::PrunedBound: return "bound";
  }
  return "unknown";
}

BnBResult branch_and_bound_maxent(int num_types, int positions, bool keep_trace) {
  require_problem(num_types, positions);
  return BranchAndBound(num_types, positions, keep_trace).solve();
}

CountAllocation exhaustive_maxent(int num_types, int positions) {
  require_problem(num_types, positions);
  CountAllocation best;
  best.entropy = -1.0;
  std::vector<int> parts;
  // Non-increasing partitions of `remaining` with parts <= `cap`.
  std::function<void(int, int)> walk = [&](int remaining, int cap) {
    if (remaining == 0) {
      double h = entropy_of_counts(parts, positions);
      if (h > best.entropy) {
        best.entropy = h;
        best.counts = parts;
        best.counts.resize(num_types, 0);
      }
      return;
    }
    if (static_cast<int>(parts.size()) == num_types) return;
    for (int c = std::min(cap, remaining); c >= 1; --c) {
      parts.push_back(c);
      walk(remaining - c, c);
      parts.pop_back();
    }
  };
  walk(positions, positions);
  return best;
}

ClosedFormReport verify_closed_form(int max_types, int max_positions, double tolerance) {
  require_problem(max_types, max_positions);
  ClosedFormReport report;
  for (int k = 1; k <= max_types; ++k) {
    for (int n = 1; n <= max_positions; ++n) {
      const double closed = closed_form_allocation(k, n).entropy;
      const BnBResult bnb = branch_and_bound_maxent(k, n);
      const double brute = exhaustive_maxent(k, n).entropy;
      add_stats(report.totals, bnb.stats);
      ++report.instances;
      if (std::abs(closed - bnb.best.entropy) > tolerance || std::abs(closed - brute) > tolerance) {
        report.mismatches.push_back({k, n, closed, bnb.best.entropy, brute});
      }
    }
  }
  return report;
}

}  // namespace fedrank
