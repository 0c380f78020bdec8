#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/core/io.hpp"
#include "nrlb/core/strings.hpp"
#include "nrlb/pipeline/document.hpp"

namespace nrlb::eval {

using Json = nlohmann::json;
using DatasetRecord = pipeline::SourceDocument;

struct LineIssue {
  std::size_t line_number = 0;  // 1-based
  std::string message;
};

struct DatasetLoadResult {
  std::vector<DatasetRecord> records;
  std::vector<LineIssue> issues;
};

/// JSON-lines loader, keys {id, source, reference}. Records missing id or
/// source are rejected per line and reported; duplicates of an id are
/// rejected too. CRLF and LF files parse identically. Raises only when the
/// file is unreadable or every nonblank line failed.
inline DatasetLoadResult load_dataset(const std::filesystem::path& path,
                                      std::string dataset_name = {}) {
  if (dataset_name.empty()) dataset_name = path.stem().string();
  DatasetLoadResult result;
  std::set<std::string> seen_ids;
  std::size_t nonblank = 0;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (strings::trim(line).empty()) continue;
    ++nonblank;
    std::size_t line_number = i + 1;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      result.issues.push_back({line_number, "not a JSON object"});
      continue;
    }
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
      result.issues.push_back({line_number, "missing id"});
      continue;
    }
    if (!j.contains("source") || !j["source"].is_string() ||
        strings::trim(j["source"].get<std::string>()).empty()) {
      result.issues.push_back({line_number, "missing source"});
      continue;
    }
    std::string id = j["id"].get<std::string>();
    if (!seen_ids.insert(id).second) {
      result.issues.push_back({line_number, "duplicate id: " + id});
      continue;
    }
    DatasetRecord record;
    record.id = std::move(id);
    record.text = j["source"].get<std::string>();
    record.reference = j.value("reference", std::string{});
    record.dataset_name = dataset_name;
    result.records.push_back(std::move(record));
  }
  if (nonblank > 0 && result.records.empty()) {
    throw IoError("every line of " + path.string() + " failed to parse");
  }
  return result;
}

}  // namespace nrlb::eval
