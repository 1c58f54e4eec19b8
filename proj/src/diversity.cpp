#include "fedrank/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fedrank/errors.hpp"
#include "fedrank/maxent.hpp"

namespace fedrank {
namespace {

double entropy_of(std::span<const int> counts, int total) {
  double h = 0.0;
  for (int c : counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

int distinct_types(std::span<const int> types) {
  std::vector<int> sorted(types.begin(), types.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace

TypeCounts TypeCounts::from_counts(std::vector<int> counts) {
  TypeCounts tc;
  for (int c : counts) {
    if (c < 0) throw InvalidInput("negative type count");
    tc.total += c;
  }
  tc.counts = std::move(counts);
  return tc;
}

double entropy(const TypeCounts& counts) {
  if (counts.total <= 0) throw InvalidInput("entropy of an empty list");
  return entropy_of(counts.counts, counts.total);
}

std::vector<double> prefix_entropies(std::span<const int> types) {
  std::unordered_map<int, std::size_t> slot;
  std::vector<int> counts;
  std::vector<double> out;
  out.reserve(types.size());
  int total = 0;
  for (int t : types) {
    auto [it, inserted] = slot.try_emplace(t, counts.size());
    if (inserted) counts.push_back(0);
    ++counts[it->second];
    ++total;
    out.push_back(entropy_of(counts, total));
  }
  return out;
}

double cumulative_entropy(std::span<const int> types) {
  if (types.empty()) throw InvalidInput("cumulative entropy of an empty list");
  double sum = 0.0;
  for (double h : prefix_entropies(types)) sum += h;
  return sum;
}

MetricValue nce_at_k(std::span<const int> types, int num_types, int k) {
  if (num_types < 1) throw InvalidInput("NCE needs at least one record type");
  if (k < 1) throw InvalidInput("cutoff k must be >= 1, got " + std::to_string(k));
  if (types.empty()) throw InvalidInput("NCE of an empty list");
  auto top = types.first(std::min<std::size_t>(static_cast<std::size_t>(k), types.size()));
  if (distinct_types(top) > num_types) {
    throw InvalidInput("list has more record types than the universe size " +
                       std::to_string(num_types));
  }
  double ideal = ideal_cumulative_entropy(num_types, static_cast<int>(top.size()));
  double value = ideal > 0.0 ? cumulative_entropy(top) / ideal : 1.0;
  return {"nce@" + std::to_string(k), value, k};
}

DiversityProfile diversity_profile(std::span<const int> types, int num_types) {
  if (types.empty()) throw InvalidInput("diversity profile of an empty list");
  DiversityProfile profile;
  profile.prefix_entropies = prefix_entropies(types);
  for (double h : profile.prefix_entropies) profile.cumulative += h;
  profile.nce = nce_at_k(types, num_types, static_cast<int>(types.size())).value;
  return profile;
}

std::vector<int> encode_types(std::span<const std::string> labels) {
  std::unordered_map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    out.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
  }
  return out;
}

std::vector<int> encode_types(std::string_view letters) {
  std::vector<std::string> labels;
  labels.reserve(letters.size());
  for (char c : letters) labels.emplace_back(1, c);
  return encode_types(labels);
}

}  // namespace fedrank
