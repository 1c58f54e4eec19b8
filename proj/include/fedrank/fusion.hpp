#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedrank/core.hpp"
#include "fedrank/ltr_ca.hpp"
#include "fedrank/nelder_mead.hpp"

namespace fedrank {

enum class ScoreNormalization { None, MinMax };

std::string to_string(ScoreNormalization norm);
ScoreNormalization parse_score_normalization(const std::string& name);

struct SSConfig : NelderMeadOptions {
  int k = 100;
  /// Queries sampled to fit the pairwise initializer.
  std::size_t init_subsample = 1000;
  int init_epochs = 20;
  double init_learning_rate = 0.1;
  double init_l2 = 1e-4;
  ScoreNormalization normalization = ScoreNormalization::None;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Shard score of a document placed at its record type's coordinate.
SparseVector fusion_features(const Document& doc);

/// Per-list min-max rescaling of shard scores to [0, 1]; a list with a single
/// distinct score maps to 1.
QueryGroup normalize_shard_scores(const QueryGroup& query);

/// Keeps the top `depth` documents of every record type by shard score.
QueryGroup truncate_shards(const QueryGroup& query, std::size_t depth);

TrainingSet training_set_from_fusion(const Dataset& dataset,
                                     ScoreNormalization norm = ScoreNormalization::None);

struct PairwiseInitModel {
  /// One weight per record type, in Dataset::record_types order.
  std::vector<double> weights;
  std::vector<std::string> sampled_qids;
  /// Regularised hinge loss after each epoch.
  std::vector<double> loss_trace;
};

/// Linear pairwise hinge ranker fitted by subgradient descent on a seeded
/// subsample of queries. Throws InvalidInput when no (relevant, irrelevant)
/// pair exists.
PairwiseInitModel pairwise_linear_init(const Dataset& dataset, const SSConfig& config);

struct SSResult {
  FusionModel model;
  TrainReport report;
  PairwiseInitModel init;
  std::vector<SimplexStep> trace;
};

FusionModel make_fusion_model(const std::vector<std::string>& record_types,
                              std::span<const double> weights);

/// Pairwise initialization followed by simplex search on -mean NDCG@k.
SSResult stochastic_search(const Dataset& dataset, const SSConfig& config);

/// Mean NDCG@k of the collated rankings under `model`.
double mean_ndcg_fusion(const Dataset& dataset, const FusionModel& model, int k);

/// Merges all shards into one ranking by weight(type) * shard score.
/// Throws InvalidInput for a record type the model does not know.
Ranking collate(const QueryGroup& query, const FusionModel& model);

}  // namespace fedrank
