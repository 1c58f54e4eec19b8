#include "fedrank/fusion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

double shard_score_of(const Document& doc) {
  if (!doc.shard_score) throw InvalidInput("document " + doc.doc_id + " has no shard score");
  return *doc.shard_score;
}

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> weights_in_type_order(const std::vector<std::string>& record_types,
                                          const FusionModel& model) {
  std::vector<double> w;
  w.reserve(record_types.size());
  for (const auto& name : record_types) {
    auto it = model.weights.find(name);
    if (it == model.weights.end()) throw InvalidInput("fusion model has no weight for record type '" + name + "'");
    w.push_back(it->second);
  }
  return w;
}

}  // namespace

std::string to_string(ScoreNormalization norm) {
  return norm == ScoreNormalization::MinMax ? "minmax" : "none";
}

ScoreNormalization parse_score_normalization(const std::string& name) {
  if (name == "none") return ScoreNormalization::None;
  if (name == "minmax") return ScoreNormalization::MinMax;
  throw InvalidInput("unknown score normalization '" + name + "'");
}

void SSConfig::validate() const {
  NelderMeadOptions::validate();
  if (k < 1) throw InvalidInput("SS cutoff k must be >= 1");
  if (init_subsample < 1) throw InvalidInput("init_subsample must be >= 1");
  if (init_epochs < 1) throw InvalidInput("init_epochs must be >= 1");
  if (!(init_learning_rate > 0.0)) throw InvalidInput("init_learning_rate must be > 0");
  if (!(init_l2 >= 0.0)) throw InvalidInput("init_l2 must be >= 0");
}

SparseVector fusion_features(const Document& doc) {
  return {{static_cast<std::uint32_t>(doc.type_index), shard_score_of(doc)}};
}

QueryGroup normalize_shard_scores(const QueryGroup& query) {
  std::map<std::string, std::pair<double, double>> range;
  for (const auto& d : query.documents) {
    const double s = shard_score_of(d);
    auto [it, inserted] = range.try_emplace(d.record_type, s, s);
    it->second.first = std::min(it->second.first, s);
    it->second.second = std::max(it->second.second, s);
  }
  QueryGroup out = query;
  for (auto& d : out.documents) {
    const auto [lo, hi] = range.at(d.record_type);
    d.shard_score = hi > lo ? (*d.shard_score - lo) / (hi - lo) : 1.0;
  }
  return out;
}

QueryGroup truncate_shards(const QueryGroup& query, std::size_t depth) {
  std::map<std::string, std::vector<std::size_t>> shards;
  for (std::size_t i = 0; i < query.documents.size(); ++i) {
    shards[query.documents[i].record_type].push_back(i);
  }
  std::vector<char> keep(query.documents.size(), 0);
  for (auto& [type, members] : shards) {
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return shard_score_of(query.documents[a]) > shard_score_of(query.documents[b]);
    });
    for (std::size_t i = 0; i < std::min(depth, members.size()); ++i) keep[members[i]] = 1;
  }
  QueryGroup out;
  out.qid = query.qid;
  for (std::size_t i = 0; i < query.documents.size(); ++i) {
    if (keep[i]) out.documents.push_back(query.documents[i]);
  }
  return out;
}

TrainingSet training_set_from_fusion(const Dataset& dataset, ScoreNormalization norm) {
  TrainingSet set;
  set.num_features = dataset.record_types.size();
  set.queries.reserve(dataset.queries.size());
  for (const auto& raw : dataset.queries) {
    const QueryGroup q = norm == ScoreNormalization::MinMax ? normalize_shard_scores(raw) : raw;
    TrainingQuery tq;
    for (const auto& d : q.documents) {
      tq.docs.push_back(fusion_features(d));
      tq.labels.push_back(d.label);
    }
    set.queries.push_back(std::move(tq));
  }
  return set;
}

PairwiseInitModel pairwise_linear_init(const Dataset& dataset, const SSConfig& config) {
  config.validate();
  const std::size_t dims = dataset.record_types.size();
  if (dims == 0 || dataset.queries.empty()) throw InvalidInput("pairwise init on an empty dataset");

  std::vector<std::size_t> chosen(dataset.queries.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  std::mt19937_64 rng(child_seed(config.seed, 1));
  if (config.init_subsample < chosen.size()) {
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(config.init_subsample);
    std::sort(chosen.begin(), chosen.end());
  }

  PairwiseInitModel model;
  struct Pair {
    std::size_t pos_type, neg_type;
    double pos_score, neg_score;
  };
  std::vector<Pair> pairs;
  for (std::size_t qi : chosen) {
    const QueryGroup q = config.normalization == ScoreNormalization::MinMax
                             ? normalize_shard_scores(dataset.queries[qi])
                             : dataset.queries[qi];
    model.sampled_qids.push_back(q.qid);
    for (const auto& p : q.documents) {
      if (p.label <= 0) continue;
      for (const auto& n : q.documents) {
        if (n.label >= p.label) continue;
        pairs.push_back({p.type_index, n.type_index, shard_score_of(p), shard_score_of(n)});
      }
    }
  }
  if (pairs.empty()) throw InvalidInput("pairwise init found no (relevant, irrelevant) document pairs");

  std::vector<double> w(dims, 0.0);
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::size_t step = 0;
  for (int epoch = 0; epoch < config.init_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      const Pair& pr = pairs[idx];
      const double eta = config.init_learning_rate / std::sqrt(static_cast<double>(++step));
      const double margin = w[pr.pos_type] * pr.pos_score - w[pr.neg_type] * pr.neg_score;
      for (double& wi : w) wi -= eta * config.init_l2 * wi;
      if (margin < 1.0) {
        w[pr.pos_type] += eta * pr.pos_score;
        w[pr.neg_type] -= eta * pr.neg_score;
      }
    }
    double loss = 0.0;
    for (const Pair& pr : pairs) {
      loss += std::max(0.0, 1.0 - (w[pr.pos_type] * pr.pos_score - w[pr.neg_type] * pr.neg_score));
    }
    double norm2 = 0.0;
    for (double wi : w) norm2 += wi * wi;
    model.loss_trace.push_back(loss / static_cast<double>(pairs.size()) + 0.5 * config.init_l2 * norm2);
  }
  model.weights = std::move(w);
  return model;
}

FusionModel make_fusion_model(const std::vector<std::string>& record_types,
                              std::span<const double> weights) {
  if (record_types.size() != weights.size()) {
    throw InvalidInput("fusion weight count does not match record type count");
  }
  FusionModel model;
  for (std::size_t i = 0; i < weights.size(); ++i) model.weights[record_types[i]] = weights[i];
  return model;
}

SSResult stochastic_search(const Dataset& dataset, const SSConfig& config) {
  config.validate();
  if (dataset.queries.empty()) throw InvalidInput("stochastic search on an empty dataset");
  const auto started = std::chrono::steady_clock::now();

  SSResult result;
  result.init = pairwise_linear_init(dataset, config);
  const TrainingSet train = training_set_from_fusion(dataset, config.normalization);
  const LossFunction loss = [&](std::span<const double> w) {
    return -mean_ndcg_linear(train, w, config.k);
  };

  const double start_objective = -loss(result.init.weights);
  NelderMeadResult nm = nelder_mead(loss, result.init.weights, config);

  result.report.initial_objective = start_objective;
  result.report.final_objective = -nm.best_loss;
  result.report.sweeps = nm.iterations;
  for (const auto& step : nm.trace) result.report.trajectory.push_back(-step.best_loss);
  result.trace = std::move(nm.trace);

  result.model = make_fusion_model(dataset.record_types, nm.best);
  result.model.init_weights = make_fusion_model(dataset.record_types, result.init.weights).weights;
  result.model.score_normalization = to_string(config.normalization);
  auto& meta = result.model.metadata;
  meta.objective = "ndcg@" + std::to_string(config.k);
  meta.seed = config.seed;
  meta.iterations = nm.iterations;
  meta.initializer = "pairwise";
  meta.initial_objective = start_objective;
  meta.final_objective = result.report.final_objective;
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

double mean_ndcg_fusion(const Dataset& dataset, const FusionModel& model, int k) {
  const TrainingSet set =
      training_set_from_fusion(dataset, parse_score_normalization(model.score_normalization));
  return mean_ndcg_linear(set, weights_in_type_order(dataset.record_types, model), k);
}

Ranking collate(const QueryGroup& query, const FusionModel& model) {
  const QueryGroup q = parse_score_normalization(model.score_normalization) == ScoreNormalization::MinMax
                           ? normalize_shard_scores(query)
                           : query;
  std::vector<ScoredDoc> scored;
  scored.reserve(q.documents.size());
  for (const auto& d : q.documents) {
    auto it = model.weights.find(d.record_type);
    if (it == model.weights.end()) {
      throw InvalidInput("fusion model has no weight for record type '" + d.record_type + "'");
    }
    scored.push_back({d.doc_id, it->second * shard_score_of(d)});
  }
  return rank_by_score(scored);
}

}  // namespace fedrank
