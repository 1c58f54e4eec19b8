#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedrank/dataset_io.hpp"
#include "fedrank/errors.hpp"
#include "support/synthetic.hpp"

using namespace fedrank;
namespace fs = std::filesystem;

namespace {

Dataset parse_records(const std::string& text) {
  std::istringstream in(text);
  return parse_record_dataset(in, "mem");
}

Dataset parse_fusion(const std::string& text) {
  std::istringstream in(text);
  return parse_fusion_dataset(in, "mem");
}

std::vector<double> dense(const SparseVector& v, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (const auto& fv : v) out[fv.index] = fv.value;
  return out;
}

}  // namespace

TEST_CASE("toy record file parses to the four-record matrix") {
  const auto ds = parse_record_dataset(fs::path(FEDRANK_DATA_DIR) / "toy_record.txt");
  REQUIRE(ds.queries.size() == 1);
  const auto& docs = ds.queries[0].documents;
  REQUIRE(docs.size() == 4);
  const std::vector<std::vector<double>> matrix = {{1, 0, 1, 0}, {1, 0, 1, 1}, {0, 1, 1, 1}, {0, 0, 0, 0}};
  const std::vector<int> labels = {1, 1, 0, 0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(docs[i].doc_id == "r" + std::to_string(i + 1));
    CHECK(docs[i].record_type == "marriage");
    CHECK(docs[i].label == labels[i]);
    CHECK(dense(docs[i].features, 4) == matrix[i]);
  }
  CHECK(ds.warnings.empty());
}

TEST_CASE("empty input yields an empty dataset and a warning") {
  const auto ds = parse_records("");
  CHECK(ds.queries.empty());
  CHECK_FALSE(ds.warnings.empty());
  CHECK(parse_records("# only a comment\n\n").queries.empty());
}

TEST_CASE("record validation errors carry the line number") {
  CHECK_THROWS_WITH_AS(parse_records("1 qid:7 1:1\n1 qid:7 2:5\n"), doctest::Contains("mem:2: non-binary feature value"),
                       InvalidInput);
  CHECK_THROWS_WITH_AS(parse_records("2 qid:7 1:1\n"), doctest::Contains("mem:1:"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_records("1 qid:7 3:1 1:1\n"), doctest::Contains("ascending"), InvalidInput);
  CHECK_THROWS_AS(parse_records("1 7 1:1\n"), InvalidInput);
  CHECK_THROWS_AS(parse_records("1 qid:7 x:1\n"), InvalidInput);
  CHECK_THROWS_WITH_AS(parse_records("1 qid:a 1:1\n1 qid:b 1:1\n1 qid:a 1:1\n"), doctest::Contains("mem:3:"),
                       InvalidInput);
  CHECK_THROWS_AS(parse_records("1 qid:a 1:1 # doc=x\n0 qid:a 1:0 # doc=x\n"), InvalidInput);
}

TEST_CASE("queries without a relevant document are dropped with a warning") {
  const auto ds = parse_records("0 qid:a 0:1\n0 qid:a 1:1\n1 qid:b 0:1\n0 qid:b 1:1\n");
  REQUIRE(ds.queries.size() == 1);
  CHECK(ds.queries[0].qid == "b");
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("a") != std::string::npos);
}

TEST_CASE("fusion file populates shard scores and sorted record types") {
  const auto ds = parse_fusion(
      "1 qid:q score:0.9 rtype:web doc:w1\n"
      "0 qid:q score:0.4 rtype:web doc:w2\n"
      "0 qid:q score:2.5 rtype:mail doc:m1\n");
  CHECK(ds.record_types == std::vector<std::string>{"mail", "web"});
  REQUIRE(ds.queries.size() == 1);
  const auto& docs = ds.queries[0].documents;
  REQUIRE(docs.size() == 3);
  CHECK(*docs[0].shard_score == 0.9);
  CHECK(docs[0].type_index == 1);
  CHECK(docs[2].type_index == 0);
  CHECK(docs[2].doc_id == "m1");
}

TEST_CASE("fusion validation errors") {
  CHECK_THROWS_WITH_AS(parse_fusion("1 qid:q score:1 rtype:a doc:x\n1 qid:q score:1 rtype:a doc:y color:red\n"),
                       doctest::Contains("mem:2:"), InvalidInput);
  CHECK_THROWS_AS(parse_fusion("1 qid:q score:nan rtype:a doc:x\n"), InvalidInput);
  CHECK_THROWS_AS(parse_fusion("1 qid:q rtype:a doc:x\n"), InvalidInput);
  CHECK_THROWS_AS(parse_fusion("1 qid:q score:1 doc:x\n"), InvalidInput);
}

TEST_CASE("missing file is an input error") {
  CHECK_THROWS_AS(parse_record_dataset(fs::path("/nonexistent/records.txt")), InvalidInput);
}

TEST_CASE("record datasets round-trip through the writer") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto ds = testing::make_binary_ltr_dataset(seed, {.queries = 15});
    std::ostringstream out;
    write_record_dataset(out, ds);
    const auto back = parse_records(out.str());
    CHECK(back.queries == ds.queries);
    CHECK(back.record_types == ds.record_types);
  }
}

TEST_CASE("fusion datasets round-trip through the writer") {
  const auto ds = testing::make_planted_fusion_dataset(4, {.queries = 12});
  std::ostringstream out;
  write_fusion_dataset(out, ds);
  const auto back = parse_fusion(out.str());
  CHECK(back.queries == ds.queries);
  CHECK(back.record_types == ds.record_types);
}

TEST_CASE("large fusion file parses in one streaming pass") {
  const fs::path path = fs::temp_directory_path() / "fedrank_stream_test.txt";
  {
    std::ofstream out(path);
    for (int q = 0; q < 30000; ++q) {
      out << "1 qid:" << q << " score:0.9 rtype:a doc:" << q << "-1\n";
      out << "0 qid:" << q << " score:0.3 rtype:b doc:" << q << "-2\n";
    }
  }
  const auto ds = parse_fusion_dataset(path);
  CHECK(ds.queries.size() == 30000);
  CHECK(ds.queries.back().documents.size() == 2);
  fs::remove(path);
}

TEST_CASE("atomic writes replace the target and leave no temporary") {
  const fs::path dir = fs::temp_directory_path() / "fedrank_atomic_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.txt";
  write_file_atomic(target, "first\n");
  write_file_atomic(target, "second\n");
  std::ifstream in(target);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  fs::remove_all(dir);
}
