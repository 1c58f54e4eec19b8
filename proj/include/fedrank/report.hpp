#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedrank/core.hpp"

namespace fedrank {

enum class MetricKind { Ndcg, Nce, SRecall };

struct MetricSpec {
  MetricKind kind = MetricKind::Ndcg;
  int k = 10;

  std::string name() const;
};

/// Parses "ndcg@10,nce@10,srecall@8".
std::vector<MetricSpec> parse_metric_list(std::string_view text);

/// Where the record-type count for NCE and S-recall comes from.
struct TypesUniverse {
  enum class Mode { Global, Query, Fixed };
  Mode mode = Mode::Query;
  int fixed = 0;

  /// "global", "query" or a positive integer.
  static TypesUniverse parse(std::string_view text);
};

struct QueryRow {
  std::string qid;
  /// One cell per metric; empty when undefined (NDCG of a query without relevant documents).
  std::vector<std::optional<double>> values;
};

struct EvalReport {
  std::vector<std::string> metrics;
  std::vector<QueryRow> rows;
  /// Mean of the defined cells of each column.
  std::vector<double> aggregate;
};

/// Scores each query's ranking (same order as dataset.queries).
EvalReport evaluate_rankings(const Dataset& dataset, const std::vector<Ranking>& rankings,
                             const std::vector<MetricSpec>& metrics, const TypesUniverse& universe);

/// Column means recomputed from the rows.
std::vector<double> aggregate_rows(const std::vector<QueryRow>& rows, std::size_t columns);

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

}  // namespace fedrank
