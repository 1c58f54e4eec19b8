#pragma once

#include <cstdint>
#include <vector>

#include "fedrank/core.hpp"

namespace fedrank {

/// Feature vectors and labels of one query, in document order.
struct TrainingQuery {
  std::vector<SparseVector> docs;
  std::vector<int> labels;
};

struct TrainingSet {
  std::vector<TrainingQuery> queries;
  std::size_t num_features = 0;
};

TrainingSet training_set_from_records(const Dataset& dataset);

/// How often each feature fires (value 1) in relevant and irrelevant documents.
struct FeatureStats {
  std::vector<std::int64_t> fre_rel;
  std::vector<std::int64_t> fre_irrel;
};

/// Throws InvalidInput if any feature value or label is not 0/1.
FeatureStats feature_stats(const Dataset& dataset);

/// w = fre_rel / (fre_rel + fre_irrel), or 0.5 for a feature that never fires.
LinearModel init_weights_customized(const FeatureStats& stats);

/// Every weight 1 / num_features.
LinearModel init_weights_uniform(std::size_t num_features);

struct CAConfig {
  int k = 10;
  /// Base step; candidates are w_i +/- step * 2^t for t = 0..step_levels.
  double step = 0.05;
  int step_levels = 4;
  int max_sweeps = 25;
  /// A sweep gaining less than this ends training.
  double tolerance = 1e-5;
  int restarts = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainReport {
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::size_t sweeps = 0;
  double wall_seconds = 0.0;
  /// Objective at the start and after every accepted move.
  std::vector<double> trajectory;
};

struct CAResult {
  LinearModel model;
  TrainReport report;
};

/// Mean NDCG@k of the linear scorer over queries with at least one relevant document.
double mean_ndcg_linear(const TrainingSet& data, std::span<const double> weights, int k);

/// Greedy coordinate ascent on mean NDCG@k. Features are visited in index
/// order; each visit tries every signed step and keeps the best one that
/// strictly improves the objective.
CAResult coordinate_ascent(const TrainingSet& data, const LinearModel& init, const CAConfig& config);

}  // namespace fedrank
