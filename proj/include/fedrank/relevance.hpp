#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fedrank/core.hpp"

namespace fedrank {

struct MetricValue {
  std::string name;
  double value = 0.0;
  int k = 1;
};

using LabelMap = std::unordered_map<std::string, int>;
using TypeMap = std::unordered_map<std::string, std::string>;

// Gains are linear in the label and discounted by log2(1 + rank).

double dcg_at_k(std::span<const int> labels_in_rank_order, int k);
double dcg_at_k(const Ranking& ranking, const LabelMap& labels, int k);

/// DCG@k of the labels sorted descending.
double idcg_at_k(std::span<const int> labels, int k);

/// NDCG@k; 0 when the ideal DCG is 0.
double ndcg_at_k(std::span<const int> labels_in_rank_order, int k);
MetricValue ndcg_at_k(const Ranking& ranking, const LabelMap& labels, int k);

/// Mean NDCG@k over queries whose ideal DCG is positive. Each entry holds the
/// labels of one query in rank order. Throws InvalidInput on an empty input.
double mean_ndcg_at_k(std::span<const std::vector<int>> labels_in_rank_order, int k);

struct RankedQuery {
  Ranking ranking;
  LabelMap labels;
};
double mean_ndcg_at_k(std::span<const RankedQuery> dataset, int k);

/// Fraction of the `num_types` record types present in the top k.
double s_recall_at_k(std::span<const int> types_in_rank_order, int num_types, int k);
double s_recall_at_k(const Ranking& ranking, const TypeMap& type_of, int num_types, int k);

}  // namespace fedrank
