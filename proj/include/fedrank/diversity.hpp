#pragma once

#include <span>
#include <string>
#include <vector>

#include "fedrank/relevance.hpp"

namespace fedrank {

/// Documents per record type within a list (or prefix of one).
struct TypeCounts {
  std::vector<int> counts;
  int total = 0;

  static TypeCounts from_counts(std::vector<int> counts);
};

struct DiversityProfile {
  /// Entropy of each prefix; entry p covers the first p + 1 documents.
  std::vector<double> prefix_entropies;
  double cumulative = 0.0;
  double nce = 0.0;
};

/// Shannon entropy (base 2) of the type distribution. Throws on total == 0.
double entropy(const TypeCounts& counts);

/// Entropy of every prefix of the list, computed in one pass.
std::vector<double> prefix_entropies(std::span<const int> types);

/// Sum of prefix entropies. Throws on an empty list.
double cumulative_entropy(std::span<const int> types);

/// Cumulative entropy of the top min(k, n) normalised by the ideal cumulative
/// entropy for `num_types` types at the same depth; 1 when that ideal is 0.
MetricValue nce_at_k(std::span<const int> types, int num_types, int k);

DiversityProfile diversity_profile(std::span<const int> types, int num_types);

/// Maps labels to dense ids in first-seen order, e.g. {"A","A","B"} -> {0,0,1}.
std::vector<int> encode_types(std::span<const std::string> labels);
/// Same for a string of one-character type labels, e.g. "AABB".
std::vector<int> encode_types(std::string_view letters);

}  // namespace fedrank
