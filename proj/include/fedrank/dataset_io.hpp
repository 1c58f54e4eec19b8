#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fedrank/core.hpp"

namespace fedrank {

// Record datasets, one document per line:
//   <label> qid:<qid> <fidx>:<val> ... # doc=<doc_id> rtype=<type>
// Fusion datasets, one shard-scored candidate per line:
//   <label> qid:<qid> score:<real> rtype:<type> doc:<doc_id>
// Blank lines and lines starting with '#' are skipped. Queries must be
// contiguous; queries without a relevant document are dropped with a warning.
// Malformed input raises InvalidInput naming the source and line number.

Dataset parse_record_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset parse_record_dataset(const std::filesystem::path& path);

Dataset parse_fusion_dataset(std::istream& in, const std::string& source = "<stream>");
Dataset parse_fusion_dataset(const std::filesystem::path& path);

void write_record_dataset(std::ostream& out, const Dataset& dataset);
void write_fusion_dataset(std::ostream& out, const Dataset& dataset);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fedrank
