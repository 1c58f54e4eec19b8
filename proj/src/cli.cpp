#include "fedrank/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fedrank/config.hpp"
#include "fedrank/dataset_io.hpp"
#include "fedrank/errors.hpp"
#include "fedrank/fusion.hpp"
#include "fedrank/ltr_ca.hpp"
#include "fedrank/maxent.hpp"
#include "fedrank/model_io.hpp"
#include "fedrank/report.hpp"

namespace fedrank {
namespace {

struct Options {
  std::string data;
  std::string out;
  std::string model;
  std::string report;
  std::string config;
  std::string trace;
  std::string init = "customized";
  std::string algo = "ss";
  std::string metrics = "ndcg@10";
  std::string universe = "query";
  int k = 0;
  std::uint64_t seed = 0;
  int types = 0;
  int positions = 0;
  bool verify = false;
  bool show_trace = false;
};

void print_warnings(const Dataset& ds, std::ostream& err) {
  for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
}

TrainConfig config_from(const Options& opt) {
  return opt.config.empty() ? TrainConfig{} : load_train_config(opt.config);
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int cmd_train_record(const Options& opt, std::ostream& out, std::ostream& err) {
  Dataset ds = parse_record_dataset(opt.data);
  print_warnings(ds, err);
  if (ds.queries.empty()) throw InvalidInput("no trainable queries in " + opt.data);
  TrainConfig cfg = config_from(opt);
  cfg.ca.k = opt.k > 0 ? opt.k : cfg.ca.k;
  cfg.ca.seed = opt.seed;

  LinearModel init;
  if (opt.init == "customized") {
    init = init_weights_customized(feature_stats(ds));
  } else if (opt.init == "uniform") {
    init = init_weights_uniform(std::max<std::size_t>(ds.num_features, 1));
  } else {
    throw InvalidInput("--init must be 'customized' or 'uniform'");
  }
  CAResult result = coordinate_ascent(training_set_from_records(ds), init, cfg.ca);
  result.model.metadata.created_at = model_timestamp();
  save_model(opt.out, result.model);
  out << "init=" << opt.init << " " << result.model.metadata.objective
      << " initial=" << fmt(result.report.initial_objective)
      << " final=" << fmt(result.report.final_objective)
      << " sweeps=" << result.report.sweeps << '\n';
  return kExitOk;
}

int cmd_train_fusion(const Options& opt, std::ostream& out, std::ostream& err) {
  Dataset ds = parse_fusion_dataset(opt.data);
  print_warnings(ds, err);
  if (ds.queries.empty()) throw InvalidInput("no trainable queries in " + opt.data);
  TrainConfig cfg = config_from(opt);
  for (auto& q : ds.queries) q = truncate_shards(q, cfg.shard_depth);

  const std::string trace_path = opt.trace.empty() ? opt.out + ".trace.csv" : opt.trace;
  std::ostringstream trace;
  trace.precision(17);
  FusionModel model;
  TrainReport report;

  if (opt.algo == "ss") {
    cfg.ss.k = opt.k > 0 ? opt.k : cfg.ss.k;
    cfg.ss.seed = opt.seed;
    SSResult result = stochastic_search(ds, cfg.ss);
    trace << "iteration,operation,best_loss\n";
    for (const auto& step : result.trace) {
      trace << step.iteration << ',' << to_string(step.op) << ',' << step.best_loss << '\n';
    }
    model = std::move(result.model);
    report = std::move(result.report);
  } else if (opt.algo == "ca") {
    cfg.ca.k = opt.k > 0 ? opt.k : cfg.ss.k;
    cfg.ca.seed = opt.seed;
    const TrainingSet set = training_set_from_fusion(ds, cfg.ss.normalization);
    CAResult result = coordinate_ascent(set, init_weights_uniform(ds.record_types.size()), cfg.ca);
    trace << "step,objective\n";
    for (std::size_t i = 0; i < result.report.trajectory.size(); ++i) {
      trace << i << ',' << result.report.trajectory[i] << '\n';
    }
    model = make_fusion_model(ds.record_types, result.model.weights);
    model.metadata = result.model.metadata;
    model.score_normalization = to_string(cfg.ss.normalization);
    report = std::move(result.report);
  } else {
    throw InvalidInput("--algo must be 'ss' or 'ca'");
  }
  model.metadata.created_at = model_timestamp();
  save_model(opt.out, model);
  write_file_atomic(trace_path, trace.str());
  out << "algo=" << opt.algo << " " << model.metadata.objective
      << " initial=" << fmt(report.initial_objective) << " final=" << fmt(report.final_objective)
      << " iterations=" << report.sweeps << '\n';
  return kExitOk;
}

std::vector<Ranking> rank_dataset(const Dataset& ds, const AnyModel& model) {
  std::vector<Ranking> rankings;
  rankings.reserve(ds.queries.size());
  for (const auto& q : ds.queries) {
    if (const auto* linear = std::get_if<LinearModel>(&model)) {
      std::vector<ScoredDoc> scored;
      for (const auto& d : q.documents) scored.push_back({d.doc_id, score_linear(*linear, d)});
      rankings.push_back(rank_by_score(scored));
    } else {
      rankings.push_back(collate(q, std::get<FusionModel>(model)));
    }
  }
  return rankings;
}

Dataset load_for(const std::string& path, const AnyModel& model) {
  return std::holds_alternative<LinearModel>(model) ? parse_record_dataset(path)
                                                    : parse_fusion_dataset(path);
}

int cmd_evaluate(const Options& opt, std::ostream& out, std::ostream& err) {
  const AnyModel model = load_model(opt.model);
  const Dataset ds = load_for(opt.data, model);
  print_warnings(ds, err);
  const auto metrics = parse_metric_list(opt.metrics);
  const auto universe = TypesUniverse::parse(opt.universe);
  const EvalReport report = evaluate_rankings(ds, rank_dataset(ds, model), metrics, universe);

  std::filesystem::path json_path = opt.report;
  std::filesystem::path csv_path = opt.report;
  if (json_path.extension() == ".csv") {
    json_path.replace_extension(".json");
  } else {
    csv_path.replace_extension(".csv");
  }
  write_file_atomic(json_path, report_to_json(report));
  write_file_atomic(csv_path, report_to_csv(report));
  out << "queries=" << report.rows.size() << '\n';
  for (std::size_t c = 0; c < report.metrics.size(); ++c) {
    out << report.metrics[c] << '=' << fmt(report.aggregate[c]) << '\n';
  }
  return kExitOk;
}

int cmd_collate(const Options& opt, std::ostream& out, std::ostream& err) {
  const FusionModel model = load_fusion_model(opt.model);
  const Dataset ds = parse_fusion_dataset(opt.data);
  print_warnings(ds, err);
  std::ostringstream csv;
  csv.precision(17);
  csv << "qid,rank,doc_id,record_type,score,label\n";
  for (const auto& q : ds.queries) {
    const Ranking ranking = collate(q, model);
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      const auto& item = ranking.items[r];
      const Document& d = q.documents[item.source_position];
      csv << q.qid << ',' << r + 1 << ',' << item.doc_id << ',' << d.record_type << ','
          << item.score << ',' << d.label << '\n';
    }
  }
  write_file_atomic(opt.out, csv.str());
  out << "collated " << ds.queries.size() << " queries into " << opt.out << '\n';
  return kExitOk;
}

std::string counts_text(const std::vector<int>& counts) {
  std::string s = "(";
  for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "," : "") + std::to_string(counts[i]);
  return s + ")";
}

int cmd_maxent(const Options& opt, std::ostream& out, std::ostream&) {
  const CountAllocation alloc = closed_form_allocation(opt.types, opt.positions);
  out << "types=" << opt.types << " positions=" << opt.positions << '\n';
  out << "counts=" << counts_text(alloc.counts) << " entropy=" << fmt(alloc.entropy) << '\n';
  out << "ideal_cumulative_entropy=" << fmt(ideal_cumulative_entropy(opt.types, opt.positions)) << '\n';
  if (!opt.verify && !opt.show_trace) return kExitOk;

  const BnBResult bnb = branch_and_bound_maxent(opt.types, opt.positions, opt.show_trace);
  if (opt.show_trace) {
    for (const auto& node : bnb.trace) {
      out << "node fixed=" << counts_text(node.fixed) << " bound=" << fmt(node.relaxation_value)
          << " feasible=" << (node.feasible ? "yes" : "no") << " incumbent=" << fmt(node.incumbent_before)
          << " -> " << to_string(node.outcome) << '\n';
    }
  }
  if (!opt.verify) return kExitOk;
  const CountAllocation brute = exhaustive_maxent(opt.types, opt.positions);
  out << "branch_and_bound counts=" << counts_text(bnb.best.counts) << " entropy=" << fmt(bnb.best.entropy)
      << " nodes=" << bnb.stats.nodes << " branched=" << bnb.stats.branched
      << " duplicate=" << bnb.stats.pruned_duplicate << " feasible=" << bnb.stats.closed_feasible
      << " bound=" << bnb.stats.pruned_bound << '\n';
  out << "exhaustive entropy=" << fmt(brute.entropy) << '\n';
  const bool agree = std::abs(bnb.best.entropy - alloc.entropy) <= 1e-9 &&
                     std::abs(brute.entropy - alloc.entropy) <= 1e-9;
  out << "verify=" << (agree ? "pass" : "FAIL") << '\n';
  if (!agree) throw InternalError("closed-form allocation disagrees with search");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated learning-to-rank toolkit", "fedrank"};
  app.require_subcommand(1);
  Options opt;

  auto* train_record = app.add_subcommand("train-record", "Train a linear record-type ranker by coordinate ascent");
  train_record->add_option("--data", opt.data, "Record dataset")->required()->check(CLI::ExistingFile);
  train_record->add_option("--init", opt.init, "customized | uniform")
      ->check(CLI::IsMember({"customized", "uniform"}));
  train_record->add_option("--k", opt.k, "NDCG cutoff (default 10)")->check(CLI::PositiveNumber);
  train_record->add_option("--out", opt.out, "Model file to write")->required();
  train_record->add_option("--seed", opt.seed, "Random seed");
  train_record->add_option("--config", opt.config, "JSON trainer config")->check(CLI::ExistingFile);

  auto* train_fusion = app.add_subcommand("train-fusion", "Learn per-record-type fusion weights");
  train_fusion->add_option("--data", opt.data, "Fusion dataset")->required()->check(CLI::ExistingFile);
  train_fusion->add_option("--algo", opt.algo, "ss | ca")->check(CLI::IsMember({"ss", "ca"}));
  train_fusion->add_option("--k", opt.k, "NDCG cutoff (default 100)")->check(CLI::PositiveNumber);
  train_fusion->add_option("--out", opt.out, "Model file to write")->required();
  train_fusion->add_option("--seed", opt.seed, "Random seed");
  train_fusion->add_option("--config", opt.config, "JSON trainer config")->check(CLI::ExistingFile);
  train_fusion->add_option("--trace", opt.trace, "Trace CSV (default <out>.trace.csv)");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model on a dataset");
  evaluate->add_option("--data", opt.data, "Dataset matching the model kind")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--model", opt.model, "Model file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--metrics", opt.metrics, "e.g. ndcg@10,nce@10,srecall@10");
  evaluate->add_option("--report", opt.report, "Report path (JSON; CSV written alongside)")->required();
  evaluate->add_option("--types-universe", opt.universe, "global | query | <K>");

  auto* collate_cmd = app.add_subcommand("collate", "Write collated rankings as CSV");
  collate_cmd->add_option("--data", opt.data, "Fusion dataset")->required()->check(CLI::ExistingFile);
  collate_cmd->add_option("--model", opt.model, "Fusion model")->required()->check(CLI::ExistingFile);
  collate_cmd->add_option("--out", opt.out, "CSV output")->required();

  auto* maxent = app.add_subcommand("maxent", "Maximum-entropy allocation of positions to record types");
  maxent->add_option("--types", opt.types, "Number of record types")->required()->check(CLI::PositiveNumber);
  maxent->add_option("--positions", opt.positions, "Number of positions")->required()->check(CLI::PositiveNumber);
  maxent->add_flag("--verify", opt.verify, "Cross-check with branch-and-bound and exhaustive search");
  maxent->add_flag("--trace", opt.show_trace, "Print the branch-and-bound node trace");

  std::vector<std::string> argv_storage{"fedrank"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitInvalid;
  }

  try {
    if (*train_record) return cmd_train_record(opt, out, err);
    if (*train_fusion) return cmd_train_fusion(opt, out, err);
    if (*evaluate) return cmd_evaluate(opt, out, err);
    if (*collate_cmd) return cmd_collate(opt, out, err);
    if (*maxent) return cmd_maxent(opt, out, err);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInvalid;
}

}  // namespace fedrank
