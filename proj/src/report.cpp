#include "fedrank/report.hpp"

#include <charconv>
#include <cstdio>
#include <json.hpp>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fedrank/diversity.hpp"
#include "fedrank/errors.hpp"
#include "fedrank/relevance.hpp"

namespace fedrank {

std::string MetricSpec::name() const {
  switch (kind) {
    case MetricKind::Ndcg: return "ndcg@" + std::to_string(k);
    case MetricKind::Nce: return "nce@" + std::to_string(k);
    case MetricKind::SRecall: return "srecall@" + std::to_string(k);
  }
  return "unknown";
}

std::vector<MetricSpec> parse_metric_list(std::string_view text) {
  std::vector<MetricSpec> specs;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    auto at = item.find('@');
    if (at == std::string_view::npos) throw InvalidInput("metric '" + std::string(item) + "' needs a cutoff, e.g. ndcg@10");
    MetricSpec spec;
    auto name = item.substr(0, at);
    if (name == "ndcg") {
      spec.kind = MetricKind::Ndcg;
    } else if (name == "nce") {
      spec.kind = MetricKind::Nce;
    } else if (name == "srecall") {
      spec.kind = MetricKind::SRecall;
    } else {
      throw InvalidInput("unknown metric '" + std::string(name) + "'");
    }
    auto digits = item.substr(at + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), spec.k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || spec.k < 1) {
      throw InvalidInput("bad cutoff in metric '" + std::string(item) + "'");
    }
    specs.push_back(spec);
  }
  if (specs.empty()) throw InvalidInput("no metrics requested");
  return specs;
}

TypesUniverse TypesUniverse::parse(std::string_view text) {
  if (text == "global") return {Mode::Global, 0};
  if (text == "query") return {Mode::Query, 0};
  int n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || n < 1) {
    throw InvalidInput("types universe must be 'global', 'query' or a positive integer");
  }
  return {Mode::Fixed, n};
}

EvalReport evaluate_rankings(const Dataset& dataset, const std::vector<Ranking>& rankings,
                             const std::vector<MetricSpec>& metrics, const TypesUniverse& universe) {
  if (rankings.size() != dataset.queries.size()) {
    throw InvalidInput("one ranking per query is required");
  }
  EvalReport report;
  for (const auto& m : metrics) report.metrics.push_back(m.name());

  for (std::size_t qi = 0; qi < dataset.queries.size(); ++qi) {
    const auto& query = dataset.queries[qi];
    std::unordered_map<std::string, const Document*> by_id;
    std::set<std::size_t> pool_types;
    for (const auto& d : query.documents) {
      by_id.emplace(d.doc_id, &d);
      pool_types.insert(d.type_index);
    }
    std::vector<int> labels;
    std::vector<int> types;
    for (const auto& item : rankings[qi].items) {
      auto it = by_id.find(item.doc_id);
      if (it == by_id.end()) throw InvalidInput("ranked document " + item.doc_id + " is not in qid " + query.qid);
      labels.push_back(it->second->label);
      types.push_back(static_cast<int>(it->second->type_index));
    }
    int num_types = 0;
    switch (universe.mode) {
      case TypesUniverse::Mode::Global: num_types = static_cast<int>(dataset.record_types.size()); break;
      case TypesUniverse::Mode::Query: num_types = static_cast<int>(pool_types.size()); break;
      case TypesUniverse::Mode::Fixed: num_types = universe.fixed; break;
    }

    QueryRow row{query.qid, {}};
    for (const auto& m : metrics) {
      switch (m.kind) {
        case MetricKind::Ndcg:
          if (idcg_at_k(labels, m.k) > 0.0) {
            row.values.emplace_back(ndcg_at_k(labels, m.k));
          } else {
            row.values.emplace_back(std::nullopt);
          }
          break;
        case MetricKind::Nce:
          row.values.emplace_back(types.empty() ? 0.0 : nce_at_k(types, num_types, m.k).value);
          break;
        case MetricKind::SRecall:
          row.values.emplace_back(s_recall_at_k(types, num_types, m.k));
          break;
      }
    }
    report.rows.push_back(std::move(row));
  }
  report.aggregate = aggregate_rows(report.rows, metrics.size());
  return report;
}

std::vector<double> aggregate_rows(const std::vector<QueryRow>& rows, std::size_t columns) {
  std::vector<double> sums(columns, 0.0);
  std::vector<std::size_t> counts(columns, 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns; ++c) {
      if (!row.values.at(c)) continue;
      sums[c] += *row.values[c];
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < columns; ++c) {
    sums[c] = counts[c] ? sums[c] / static_cast<double>(counts[c]) : 0.0;
  }
  return sums;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["metrics"] = report.metrics;
  nlohmann::json agg = nlohmann::json::object();
  for (std::size_t c = 0; c < report.metrics.size(); ++c) agg[report.metrics[c]] = report.aggregate[c];
  j["aggregate"] = agg;
  j["queries"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["qid"] = row.qid;
    for (std::size_t c = 0; c < report.metrics.size(); ++c) {
      r[report.metrics[c]] = row.values[c] ? nlohmann::json(*row.values[c]) : nlohmann::json(nullptr);
    }
    j["queries"].push_back(std::move(r));
  }
  j["num_queries"] = report.rows.size();
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "qid";
  for (const auto& m : report.metrics) out << ',' << m;
  out << '\n';
  for (const auto& row : report.rows) {
    out << row.qid;
    for (const auto& v : row.values) {
      out << ',';
      if (v) out << *v;
    }
    out << '\n';
  }
  out << "__mean__";
  for (double v : report.aggregate) out << ',' << v;
  out << '\n';
  return out.str();
}

}  // namespace fedrank
