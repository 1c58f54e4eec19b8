#include "fedrank/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fedrank/errors.hpp"

namespace fedrank {

std::vector<std::string> Ranking::doc_ids() const {
  std::vector<std::string> ids;
  ids.reserve(items.size());
  for (const auto& item : items) ids.push_back(item.doc_id);
  return ids;
}

std::vector<std::size_t> argsort_descending(std::span<const double> scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw InvalidInput("non-finite score at position " + std::to_string(i));
    }
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

Ranking rank_by_score(std::span<const ScoredDoc> docs) {
  std::vector<double> scores;
  scores.reserve(docs.size());
  for (const auto& d : docs) scores.push_back(d.score);
  Ranking ranking;
  ranking.items.reserve(docs.size());
  for (std::size_t pos : argsort_descending(scores)) {
    ranking.items.push_back({docs[pos].doc_id, docs[pos].score, pos});
  }
  return ranking;
}

double score_linear(std::span<const double> weights, const SparseVector& features) {
  double score = 0.0;
  for (const auto& f : features) {
    if (f.index < weights.size()) score += weights[f.index] * f.value;
  }
  return score;
}

double score_linear(const LinearModel& model, const Document& doc) {
  return score_linear(model.weights, doc.features);
}

void reindex_dataset(Dataset& dataset) {
  std::set<std::string> names;
  std::size_t num_features = 0;
  for (const auto& q : dataset.queries) {
    for (const auto& d : q.documents) {
      names.insert(d.record_type);
      if (!d.features.empty()) {
        num_features = std::max<std::size_t>(num_features, d.features.back().index + 1);
      }
    }
  }
  dataset.record_types.assign(names.begin(), names.end());
  dataset.num_features = num_features;
  for (auto& q : dataset.queries) {
    for (auto& d : q.documents) {
      auto it = std::lower_bound(dataset.record_types.begin(), dataset.record_types.end(),
                                 d.record_type);
      d.type_index = static_cast<std::size_t>(it - dataset.record_types.begin());
    }
  }
}

}  // namespace fedrank
