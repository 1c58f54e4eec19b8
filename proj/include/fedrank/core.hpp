#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fedrank {

struct FeatureValue {
  std::uint32_t index = 0;
  double value = 0.0;

  bool operator==(const FeatureValue&) const = default;
};

/// Sparse feature vector, indices strictly ascending.
using SparseVector = std::vector<FeatureValue>;

/// One candidate record returned for a query.
struct Document {
  std::string doc_id;
  std::string record_type;
  /// Position of record_type in Dataset::record_types.
  std::size_t type_index = 0;
  SparseVector features;
  int label = 0;
  /// Score assigned by the record-specific ranker; required for fusion data.
  std::optional<double> shard_score;

  bool operator==(const Document&) const = default;
};

struct QueryGroup {
  std::string qid;
  std::vector<Document> documents;

  bool operator==(const QueryGroup&) const = default;
};

struct Dataset {
  /// Distinct record type names, sorted lexicographically; index = type_index.
  std::vector<std::string> record_types;
  std::vector<QueryGroup> queries;
  /// One past the largest feature index seen.
  std::size_t num_features = 0;
  std::vector<std::string> warnings;
};

struct ModelMetadata {
  std::string objective;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::string initializer;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  std::optional<std::string> created_at;

  bool operator==(const ModelMetadata&) const = default;
};

/// Linear ranker over (binary) features.
struct LinearModel {
  std::vector<double> weights;
  ModelMetadata metadata;

  bool operator==(const LinearModel&) const = default;
};

/// One weight per record type, used to collate shard lists.
struct FusionModel {
  std::map<std::string, double> weights;
  ModelMetadata metadata;
  /// Weights produced by the pairwise initializer, if one was used.
  std::map<std::string, double> init_weights;
  /// "none" or "minmax"; applied to shard scores before weighting.
  std::string score_normalization = "none";

  bool operator==(const FusionModel&) const = default;
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
};

struct RankedDoc {
  std::string doc_id;
  double score = 0.0;
  /// Index of the document in the input sequence.
  std::size_t source_position = 0;

  bool operator==(const RankedDoc&) const = default;
};

/// Documents in descending score order.
struct Ranking {
  std::vector<RankedDoc> items;

  std::size_t size() const { return items.size(); }
  std::vector<std::string> doc_ids() const;
  bool operator==(const Ranking&) const = default;
};

/// Indices of `scores` sorted by descending score; ties keep input order.
/// Throws InvalidInput on a non-finite score.
std::vector<std::size_t> argsort_descending(std::span<const double> scores);

Ranking rank_by_score(std::span<const ScoredDoc> docs);

/// Sum of w_i * x_i; features beyond the weight vector contribute 0.
double score_linear(std::span<const double> weights, const SparseVector& features);
double score_linear(const LinearModel& model, const Document& doc);

/// Rebuilds record_types (sorted), type_index and num_features from the documents.
void reindex_dataset(Dataset& dataset);

}  // namespace fedrank
