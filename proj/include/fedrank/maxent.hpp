#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fedrank {

/// Integer document counts per record type for the top-n positions.
struct CountAllocation {
  std::vector<int> counts;
  double entropy = 0.0;
};

/// Maximum-entropy allocation of n documents over K types: n mod K types get
/// floor(n/K) + 1 documents, the rest floor(n/K). Smaller counts come first.
CountAllocation closed_form_allocation(int num_types, int positions);

/// Sum over p = 1..n of the maximum prefix entropy for p documents.
double ideal_cumulative_entropy(int num_types, int positions);

struct RelaxedSolution {
  std::vector<double> probabilities;
  double entropy = 0.0;
};

/// Continuous maximum-entropy distribution over K types with the leading
/// coordinates fixed: the free coordinates split the residual mass equally.
/// Throws InvalidInput when the fixed mass exceeds 1 or nothing is free.
RelaxedSolution relaxation_optimum(std::span<const double> fixed, int num_types);

enum class NodeOutcome {
  Branched,            // relaxation infeasible but above incumbent
  PrunedDuplicate,     // count multiset already evaluated
  ClosedFeasible,      // relaxation optimum is integral; subtree solved
  PrunedBound,         // relaxation bound below incumbent
};

std::string to_string(NodeOutcome outcome);

struct BnBNode {
  /// Counts fixed for the leading coordinates (probability = count / n).
  std::vector<int> fixed;
  std::vector<double> relaxation;
  double relaxation_value = 0.0;
  bool feasible = false;
  NodeOutcome outcome = NodeOutcome::Branched;
  double incumbent_before = 0.0;
  double incumbent_after = 0.0;
};

struct BnBStats {
  std::size_t nodes = 0;
  std::size_t branched = 0;
  std::size_t pruned_duplicate = 0;
  std::size_t closed_feasible = 0;
  std::size_t pruned_bound = 0;
};

struct BnBResult {
  CountAllocation best;
  BnBStats stats;
  std::vector<BnBNode> trace;
};

/// Exact solver for the integer max-entropy problem. Fixes coordinates left to
/// right over the count grid {0..n} in ascending order, depth first, and closes
/// a node when its count multiset was seen before, when its relaxation bound
/// is below the incumbent, or when its relaxation optimum is integral.
BnBResult branch_and_bound_maxent(int num_types, int positions, bool keep_trace = false);

/// Best entropy over every partition of n into at most K parts.
CountAllocation exhaustive_maxent(int num_types, int positions);

struct ClosedFormMismatch {
  int num_types = 0;
  int positions = 0;
  double closed_form = 0.0;
  double branch_and_bound = 0.0;
  double exhaustive = 0.0;
};

struct ClosedFormReport {
  std::size_t instances = 0;
  BnBStats totals;
  std::vector<ClosedFormMismatch> mismatches;

  bool passed() const { return mismatches.empty(); }
};

/// Cross-checks the closed form against branch-and-bound and exhaustive search
/// for every 1 <= K <= max_types, 1 <= n <= max_positions.
ClosedFormReport verify_closed_form(int max_types, int max_positions, double tolerance = 1e-9);

}  // namespace fedrank
