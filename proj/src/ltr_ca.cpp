#include "fedrank/ltr_ca.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "fedrank/errors.hpp"
#include "fedrank/parallel.hpp"
#include "fedrank/relevance.hpp"

namespace fedrank {
namespace {

double query_ndcg(std::span<const double> scores, std::span<const int> labels, double ideal, int k) {
  if (ideal <= 0.0) return 0.0;
  std::vector<int> ranked;
  ranked.reserve(labels.size());
  for (std::size_t pos : argsort_descending(scores)) ranked.push_back(labels[pos]);
  return dcg_at_k(ranked, k) / ideal;
}

struct Occurrence {
  std::size_t doc = 0;
  double value = 0.0;
};

/// Postings of one feature inside one query.
struct QueryPostings {
  std::size_t query = 0;
  std::vector<Occurrence> hits;
};

class AscentState {
 public:
  AscentState(const TrainingSet& data, std::vector<double> weights, int k)
      : data_(data), weights_(std::move(weights)), k_(k) {
    const std::size_t nq = data.queries.size();
    ideal_.resize(nq);
    scores_.resize(nq);
    ndcg_.resize(nq);
    postings_.resize(weights_.size());
    for (std::size_t q = 0; q < nq; ++q) {
      const auto& query = data.queries[q];
      ideal_[q] = idcg_at_k(query.labels, k);
      if (ideal_[q] > 0.0) ++counted_;
      for (std::size_t d = 0; d < query.docs.size(); ++d) {
        for (const auto& f : query.docs[d]) {
          if (f.index >= weights_.size() || f.value == 0.0) continue;
          auto& plist = postings_[f.index];
          if (plist.empty() || plist.back().query != q) plist.push_back({q, {}});
          plist.back().hits.push_back({d, f.value});
        }
      }
      refresh_query(q);
    }
  }

  double objective() const { return mean_of(ndcg_); }
  const std::vector<double>& weights() const { return weights_; }
  bool feature_is_active(std::size_t j) const { return !postings_[j].empty(); }

  /// Objective if weight j moved by delta.
  double trial(std::size_t j, double delta) const {
    const auto& plist = postings_[j];
    std::vector<double> patched(plist.size());
    parallel_for(plist.size(), [&](std::size_t a) {
      const std::size_t q = plist[a].query;
      std::vector<double> s = scores_[q];
      for (const auto& hit : plist[a].hits) s[hit.doc] += delta * hit.value;
      patched[a] = query_ndcg(s, data_.queries[q].labels, ideal_[q], k_);
    });
    std::vector<double> ndcg = ndcg_;
    for (std::size_t a = 0; a < plist.size(); ++a) ndcg[plist[a].query] = patched[a];
    return mean_of(ndcg);
  }

  void set_weight(std::size_t j, double value) {
    weights_[j] = value;
    const auto& plist = postings_[j];
    parallel_for(plist.size(), [&](std::size_t a) { refresh_query(plist[a].query); });
  }

 private:
  double mean_of(const std::vector<double>& ndcg) const {
    if (counted_ == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t q = 0; q < ndcg.size(); ++q) {
      if (ideal_[q] > 0.0) sum += ndcg[q];
    }
    return sum / static_cast<double>(counted_);
  }

  void refresh_query(std::size_t q) {
    const auto& query = data_.queries[q];
    auto& s = scores_[q];
    s.resize(query.docs.size());
    for (std::size_t d = 0; d < query.docs.size(); ++d) s[d] = score_linear(weights_, query.docs[d]);
    ndcg_[q] = query_ndcg(s, query.labels, ideal_[q], k_);
  }

  const TrainingSet& data_;
  std::vector<double> weights_;
  int k_;
  std::size_t counted_ = 0;
  std::vector<double> ideal_;
  std::vector<std::vector<double>> scores_;
  std::vector<double> ndcg_;
  std::vector<std::vector<QueryPostings>> postings_;
};

struct AscentRun {
  std::vector<double> weights;
  TrainReport report;
};

AscentRun ascend(const TrainingSet& data, std::vector<double> start, const CAConfig& config) {
  AscentState state(data, std::move(start), config.k);
  AscentRun run;
  run.report.initial_objective = state.objective();
  run.report.trajectory.push_back(run.report.initial_objective);
  double current = run.report.initial_objective;

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (std::size_t j = 0; j < state.weights().size(); ++j) {
      if (!state.feature_is_active(j)) continue;
      double best_value = current;
      double best_delta = 0.0;
      for (int t = 0; t <= config.step_levels; ++t) {
        const double magnitude = config.step * std::ldexp(1.0, t);
        for (double delta : {magnitude, -magnitude}) {
          const double value = state.trial(j, delta);
          if (value > best_value) {
            best_value = value;
            best_delta = delta;
          }
        }
      }
      if (best_delta == 0.0) continue;
      const double previous = state.weights()[j];
      state.set_weight(j, previous + best_delta);
      // Scores are recomputed from scratch on acceptance; undo if rounding
      // lost the gain seen incrementally.
      if (state.objective() <= current) {
        state.set_weight(j, previous);
        continue;
      }
      current = state.objective();
      run.report.trajectory.push_back(current);
    }
    ++run.report.sweeps;
    if (current - sweep_start < config.tolerance) break;
  }
  run.report.final_objective = current;
  run.weights = state.weights();
  return run;
}

}  // namespace

TrainingSet training_set_from_records(const Dataset& dataset) {
  TrainingSet set;
  set.num_features = dataset.num_features;
  set.queries.reserve(dataset.queries.size());
  for (const auto& q : dataset.queries) {
    TrainingQuery tq;
    for (const auto& d : q.documents) {
      tq.docs.push_back(d.features);
      tq.labels.push_back(d.label);
    }
    set.queries.push_back(std::move(tq));
  }
  return set;
}

FeatureStats feature_stats(const Dataset& dataset) {
  FeatureStats stats;
  stats.fre_rel.assign(dataset.num_features, 0);
  stats.fre_irrel.assign(dataset.num_features, 0);
  for (const auto& q : dataset.queries) {
    for (const auto& d : q.documents) {
      if (d.label != 0 && d.label != 1) {
        throw InvalidInput("non-binary label for document " + d.doc_id);
      }
      for (const auto& f : d.features) {
        if (f.value != 0.0 && f.value != 1.0) {
          throw InvalidInput("non-binary feature value for document " + d.doc_id);
        }
        if (f.index >= stats.fre_rel.size()) {
          stats.fre_rel.resize(f.index + 1, 0);
          stats.fre_irrel.resize(f.index + 1, 0);
        }
        if (f.value == 1.0) ++(d.label == 1 ? stats.fre_rel : stats.fre_irrel)[f.index];
      }
    }
  }
  return stats;
}

LinearModel init_weights_customized(const FeatureStats& stats) {
  LinearModel model;
  model.weights.resize(stats.fre_rel.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    const auto rel = stats.fre_rel[i];
    const auto irrel = stats.fre_irrel[i];
    model.weights[i] = (rel == 0 && irrel == 0)
                           ? 0.5
                           : static_cast<double>(rel) / static_cast<double>(rel + irrel);
  }
  model.metadata.initializer = "customized";
  return model;
}

LinearModel init_weights_uniform(std::size_t num_features) {
  if (num_features == 0) throw InvalidInput("uniform init needs at least one feature");
  LinearModel model;
  model.weights.assign(num_features, 1.0 / static_cast<double>(num_features));
  model.metadata.initializer = "uniform";
  return model;
}

void CAConfig::validate() const {
  if (k < 1) throw InvalidInput("CA cutoff k must be >= 1");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("CA step must be > 0");
  if (step_levels < 0) throw InvalidInput("CA step_levels must be >= 0");
  if (max_sweeps < 1) throw InvalidInput("CA max_sweeps must be >= 1");
  if (!(tolerance >= 0.0)) throw InvalidInput("CA tolerance must be >= 0");
  if (restarts < 1) throw InvalidInput("CA restarts must be >= 1");
}

double mean_ndcg_linear(const TrainingSet& data, std::span<const double> weights, int k) {
  std::vector<double> ndcg(data.queries.size(), 0.0);
  std::vector<char> counted(data.queries.size(), 0);
  parallel_for(data.queries.size(), [&](std::size_t q) {
    const auto& query = data.queries[q];
    const double ideal = idcg_at_k(query.labels, k);
    if (ideal <= 0.0) return;
    counted[q] = 1;
    std::vector<double> s;
    s.reserve(query.docs.size());
    for (const auto& d : query.docs) s.push_back(score_linear(weights, d));
    ndcg[q] = query_ndcg(s, query.labels, ideal, k);
  });
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t q = 0; q < ndcg.size(); ++q) {
    if (!counted[q]) continue;
    sum += ndcg[q];
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

CAResult coordinate_ascent(const TrainingSet& data, const LinearModel& init, const CAConfig& config) {
  config.validate();
  if (data.queries.empty()) throw InvalidInput("coordinate ascent on an empty dataset");
  const auto started = std::chrono::steady_clock::now();

  std::vector<double> start = init.weights;
  start.resize(std::max(start.size(), data.num_features), 0.0);
  for (double w : start) {
    if (!std::isfinite(w)) throw InvalidInput("initial weights must be finite");
  }

  AscentRun best = ascend(data, start, config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 1; r < config.restarts; ++r) {
    std::vector<double> random_start(start.size());
    for (auto& w : random_start) w = unit(rng);
    AscentRun run = ascend(data, std::move(random_start), config);
    run.report.sweeps += best.report.sweeps;
    if (run.report.final_objective > best.report.final_objective) {
      run.report.initial_objective = best.report.initial_objective;
      best = std::move(run);
    } else {
      best.report.sweeps = run.report.sweeps;
    }
  }

  CAResult result;
  result.model.weights = std::move(best.weights);
  result.model.metadata = init.metadata;
  result.model.metadata.objective = "ndcg@" + std::to_string(config.k);
  result.model.metadata.seed = config.seed;
  result.model.metadata.iterations = best.report.sweeps;
  result.model.metadata.initial_objective = best.report.initial_objective;
  result.model.metadata.final_objective = best.report.final_objective;
  result.report = std::move(best.report);
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace fedrank
