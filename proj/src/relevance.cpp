#include "fedrank/relevance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

void require_cutoff(int k) {
  if (k < 1) throw InvalidInput("cutoff k must be >= 1, got " + std::to_string(k));
}

std::vector<int> labels_of(const Ranking& ranking, const LabelMap& labels) {
  std::vector<int> out;
  out.reserve(ranking.size());
  for (const auto& item : ranking.items) {
    auto it = labels.find(item.doc_id);
    out.push_back(it == labels.end() ? 0 : it->second);
  }
  return out;
}

}  // namespace

double dcg_at_k(std::span<const int> labels_in_rank_order, int k) {
  require_cutoff(k);
  std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k), labels_in_rank_order.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (labels_in_rank_order[i] != 0) {
      dcg += labels_in_rank_order[i] / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  return dcg;
}

double dcg_at_k(const Ranking& ranking, const LabelMap& labels, int k) {
  return dcg_at_k(labels_of(ranking, labels), k);
}

double idcg_at_k(std::span<const int> labels, int k) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return dcg_at_k(sorted, k);
}

double ndcg_at_k(std::span<const int> labels_in_rank_order, int k) {
  double ideal = idcg_at_k(labels_in_rank_order, k);
  if (ideal <= 0.0) return 0.0;
  return dcg_at_k(labels_in_rank_order, k) / ideal;
}

MetricValue ndcg_at_k(const Ranking& ranking, const LabelMap& labels, int k) {
  return {"ndcg@" + std::to_string(k), ndcg_at_k(labels_of(ranking, labels), k), k};
}

double mean_ndcg_at_k(std::span<const std::vector<int>> labels_in_rank_order, int k) {
  require_cutoff(k);
  if (labels_in_rank_order.empty()) throw InvalidInput("mean NDCG over an empty dataset");
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& labels : labels_in_rank_order) {
    if (idcg_at_k(labels, k) <= 0.0) continue;
    sum += ndcg_at_k(labels, k);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double mean_ndcg_at_k(std::span<const RankedQuery> dataset, int k) {
  std::vector<std::vector<int>> all;
  all.reserve(dataset.size());
  for (const auto& q : dataset) all.push_back(labels_of(q.ranking, q.labels));
  return mean_ndcg_at_k(all, k);
}

double s_recall_at_k(std::span<const int> types_in_rank_order, int num_types, int k) {
  require_cutoff(k);
  if (num_types < 1) throw InvalidInput("S-recall needs at least one record type");
  std::size_t depth = std::min<std::size_t>(static_cast<std::size_t>(k), types_in_rank_order.size());
  std::unordered_set<int> seen(types_in_rank_order.begin(), types_in_rank_order.begin() + depth);
  if (seen.size() > static_cast<std::size_t>(num_types)) {
    throw InvalidInput("ranking contains more record types than the universe size " +
                       std::to_string(num_types));
  }
  return static_cast<double>(seen.size()) / num_types;
}

double s_recall_at_k(const Ranking& ranking, const TypeMap& type_of, int num_types, int k) {
  std::unordered_map<std::string, int> ids;
  std::vector<int> types;
  types.reserve(ranking.size());
  for (const auto& item : ranking.items) {
    auto it = type_of.find(item.doc_id);
    if (it == type_of.end()) throw InvalidInput("no record type for document " + item.doc_id);
    auto [slot, inserted] = ids.try_emplace(it->second, static_cast<int>(ids.size()));
    types.push_back(slot->second);
  }
  return s_recall_at_k(types, num_types, k);
}

}  // namespace fedrank
