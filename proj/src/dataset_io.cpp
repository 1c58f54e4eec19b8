#include "fedrank/dataset_io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "fedrank/errors.hpp"

namespace fedrank {
namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineError {
 public:
  LineError(const std::string& source, std::size_t line) : source_(source), line_(line) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput(source_ + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

double parse_real(std::string_view text, const LineError& err, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    err.fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, const LineError& err, const char* what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    err.fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

int parse_label(std::string_view text, const LineError& err) {
  const int label = parse_int<int>(text, err, "label");
  if (label != 0 && label != 1) err.fail("label must be 0 or 1, got " + std::string(text));
  return label;
}

/// Accumulates documents into contiguous query groups.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(std::string source) : source_(std::move(source)) {}

  void add(const std::string& qid, Document doc, const LineError& err) {
    if (dataset_.queries.empty() || dataset_.queries.back().qid != qid) {
      if (!seen_qids_.insert(qid).second) err.fail("qid " + qid + " is not contiguous");
      dataset_.queries.push_back({qid, {}});
      doc_ids_.clear();
    }
    if (!doc_ids_.insert(doc.doc_id).second) {
      err.fail("duplicate doc id '" + doc.doc_id + "' in qid " + qid);
    }
    dataset_.queries.back().documents.push_back(std::move(doc));
    ++documents_;
  }

  Dataset finish() {
    if (documents_ == 0) dataset_.warnings.push_back(source_ + ": empty dataset");
    std::vector<QueryGroup> kept;
    kept.reserve(dataset_.queries.size());
    for (auto& q : dataset_.queries) {
      bool positive = false;
      for (const auto& d : q.documents) positive = positive || d.label > 0;
      if (positive) {
        kept.push_back(std::move(q));
      } else {
        dataset_.warnings.push_back(source_ + ": dropped qid " + q.qid + " (no relevant documents)");
      }
    }
    dataset_.queries = std::move(kept);
    reindex_dataset(dataset_);
    return std::move(dataset_);
  }

 private:
  std::string source_;
  Dataset dataset_;
  std::unordered_set<std::string> seen_qids_;
  std::unordered_set<std::string> doc_ids_;
  std::size_t documents_ = 0;
};

template <typename LineParser>
Dataset parse_lines(std::istream& in, const std::string& source, LineParser&& parse_line) {
  DatasetBuilder builder(source);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    auto first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos || view[first] == '#') continue;
    parse_line(view, LineError(source, line_no), builder, line_no);
  }
  if (in.bad()) throw InvalidInput(source + ": read error");
  return builder.finish();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

}  // namespace

Dataset parse_record_dataset(std::istream& in, const std::string& source) {
  return parse_lines(in, source, [](std::string_view line, const LineError& err,
                                    DatasetBuilder& builder, std::size_t line_no) {
    std::string_view body = line;
    std::string_view comment;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      body = line.substr(0, hash);
      comment = line.substr(hash + 1);
    }
    auto tokens = split_ws(body);
    if (tokens.size() < 2) err.fail("expected '<label> qid:<qid> ...'");
    Document doc;
    doc.label = parse_label(tokens[0], err);
    if (tokens[1].substr(0, 4) != "qid:" || tokens[1].size() == 4) err.fail("expected qid:<qid>");
    const std::string qid(tokens[1].substr(4));

    long long last_index = -1;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      auto colon = tokens[i].find(':');
      if (colon == std::string_view::npos) err.fail("malformed feature '" + std::string(tokens[i]) + "'");
      const auto index = parse_int<std::uint32_t>(tokens[i].substr(0, colon), err, "feature index");
      const double value = parse_real(tokens[i].substr(colon + 1), err, "feature value");
      if (static_cast<long long>(index) <= last_index) err.fail("feature indices must be ascending");
      if (value != 0.0 && value != 1.0) {
        err.fail("non-binary feature value " + std::string(tokens[i].substr(colon + 1)));
      }
      last_index = index;
      doc.features.push_back({index, value});
    }

    for (auto tok : split_ws(comment)) {
      if (tok.substr(0, 4) == "doc=") doc.doc_id = std::string(tok.substr(4));
      if (tok.substr(0, 6) == "rtype=") doc.record_type = std::string(tok.substr(6));
    }
    if (doc.doc_id.empty()) doc.doc_id = "line" + std::to_string(line_no);
    if (doc.record_type.empty()) doc.record_type = "default";
    builder.add(qid, std::move(doc), err);
  });
}

Dataset parse_record_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_record_dataset(in, path.string());
}

Dataset parse_fusion_dataset(std::istream& in, const std::string& source) {
  return parse_lines(in, source, [](std::string_view line, const LineError& err,
                                    DatasetBuilder& builder, std::size_t) {
    auto tokens = split_ws(line);
    if (tokens.empty()) err.fail("empty record");
    Document doc;
    doc.label = parse_label(tokens[0], err);
    std::string qid;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto colon = tokens[i].find(':');
      if (colon == std::string_view::npos) err.fail("malformed field '" + std::string(tokens[i]) + "'");
      const auto key = tokens[i].substr(0, colon);
      const auto value = tokens[i].substr(colon + 1);
      if (value.empty()) err.fail("empty value for field '" + std::string(key) + "'");
      if (key == "qid") {
        qid = value;
      } else if (key == "score") {
        doc.shard_score = parse_real(value, err, "score");
      } else if (key == "rtype") {
        doc.record_type = value;
      } else if (key == "doc") {
        doc.doc_id = value;
      } else {
        err.fail("unknown field '" + std::string(key) + "'");
      }
    }
    if (qid.empty()) err.fail("missing qid");
    if (!doc.shard_score) err.fail("missing score");
    if (doc.record_type.empty()) err.fail("missing rtype");
    if (doc.doc_id.empty()) err.fail("missing doc");
    builder.add(qid, std::move(doc), err);
  });
}

Dataset parse_fusion_dataset(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_fusion_dataset(in, path.string());
}

void write_record_dataset(std::ostream& out, const Dataset& dataset) {
  auto saved = out.precision(17);
  for (const auto& q : dataset.queries) {
    for (const auto& d : q.documents) {
      out << d.label << " qid:" << q.qid;
      for (const auto& f : d.features) out << ' ' << f.index << ':' << f.value;
      out << " # doc=" << d.doc_id << " rtype=" << d.record_type << '\n';
    }
  }
  out.precision(saved);
}

void write_fusion_dataset(std::ostream& out, const Dataset& dataset) {
  auto saved = out.precision(17);
  for (const auto& q : dataset.queries) {
    for (const auto& d : q.documents) {
      out << d.label << " qid:" << q.qid << " score:" << d.shard_score.value_or(0.0)
          << " rtype:" << d.record_type << " doc:" << d.doc_id << '\n';
    }
  }
  out.precision(saved);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidInput("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidInput("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace fedrank
