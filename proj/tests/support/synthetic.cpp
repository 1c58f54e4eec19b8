#include "support/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace fedrank::testing {

Dataset make_binary_ltr_dataset(std::uint64_t seed, const BinaryLtrSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset ds;
  for (std::size_t q = 0; q < spec.queries; ++q) {
    QueryGroup group;
    group.qid = "q" + std::to_string(q);
    std::vector<std::size_t> order(spec.docs_per_query);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> labels(spec.docs_per_query, 0);
    for (std::size_t r = 0; r < std::min(spec.relevant_per_query, order.size()); ++r) labels[order[r]] = 1;

    for (std::size_t d = 0; d < spec.docs_per_query; ++d) {
      Document doc;
      doc.doc_id = group.qid + "-d" + std::to_string(d);
      doc.record_type = "record";
      doc.label = labels[d];
      for (std::size_t f = 0; f < spec.features; ++f) {
        double rate = spec.noise_rate;
        if (f < spec.strong_features) {
          rate = doc.label ? spec.strong_rate : 0.0;
        } else if (f < spec.strong_features + spec.weak_features) {
          rate = doc.label ? spec.weak_rel_rate : spec.weak_irrel_rate;
        }
        if (unit(rng) < rate) doc.features.push_back({static_cast<std::uint32_t>(f), 1.0});
      }
      group.documents.push_back(std::move(doc));
    }
    ds.queries.push_back(std::move(group));
  }
  reindex_dataset(ds);
  ds.num_features = std::max(ds.num_features, spec.features);
  return ds;
}

Dataset make_planted_fusion_dataset(std::uint64_t seed, const PlantedFusionSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, spec.score_noise);
  Dataset ds;
  for (std::size_t q = 0; q < spec.queries; ++q) {
    QueryGroup group;
    group.qid = "q" + std::to_string(q + spec.qid_offset);
    std::vector<double> utility;
    std::vector<double> planted_score;
    for (std::size_t shard = 0; shard < spec.planted.size(); ++shard) {
      for (std::size_t d = 0; d < spec.docs_per_shard; ++d) {
        Document doc;
        doc.record_type = "t" + std::to_string(shard);
        doc.doc_id = group.qid + "-" + doc.record_type + "-" + std::to_string(d);
        const double u = unit(rng);
        const double observed = std::max(0.0, u + noise(rng));
        doc.shard_score = observed / spec.planted[shard];
        utility.push_back(u);
        planted_score.push_back(observed);
        group.documents.push_back(std::move(doc));
      }
    }
    const auto& key = spec.label_by_planted_score ? planted_score : utility;
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    for (std::size_t r = 0; r < std::min(spec.relevant_per_query, order.size()); ++r) {
      group.documents[order[r]].label = 1;
    }
    ds.queries.push_back(std::move(group));
  }
  reindex_dataset(ds);
  return ds;
}

}  // namespace fedrank::testing
