#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/core/error.hpp"
#include "nrlb/core/io.hpp"
#include "nrlb/eval/dataset.hpp"
#include "nrlb/pipeline/artifact.hpp"
#include "nrlb/text/readability.hpp"
#include "nrlb/text/rouge.hpp"

namespace nrlb::eval {

struct RoundMeans {
  double rouge1_f1 = 0.0;  // percentage scale; valid when rouge_docs > 0
  double fkgl = 0.0;
  double dcrs = 0.0;
  double cli = 0.0;
  double ari = 0.0;
  std::size_t document_count = 0;  // documents contributing readability means
  std::size_t rouge_docs = 0;      // documents with a nonempty reference
};

/// Per-round unweighted means over one dataset's artifacts.
struct EvalReport {
  std::string dataset_name;
  std::map<int, RoundMeans> rounds;
  Json config_echo;
  std::vector<std::string> missing;  // artifact files that were expected but absent
};

/// Recomputes ROUGE-1 (against references) and the four readability scores
/// on each persisted round summary, then averages per round. Documents with
/// an empty reference contribute readability but no ROUGE; missing artifacts
/// are excluded and reported.
inline EvalReport evaluate_run(const std::filesystem::path& artifact_dir,
                               const std::vector<DatasetRecord>& records,
                               const text::WordSet& familiar_words,
                               const text::TokenizerOptions& tokenizer = {},
                               int max_rounds = 16) {
  EvalReport report;
  if (!records.empty()) report.dataset_name = records.front().dataset_name;

  std::map<int, std::vector<pipeline::MetricSnapshot>> per_round;
  for (const auto& record : records) {
    bool any = false;
    for (int round = 0; round <= max_rounds; ++round) {
      std::filesystem::path path =
          artifact_dir / pipeline::artifact_file_name(record.id, round);
      if (!std::filesystem::exists(path)) {
        if (round == 0) break;
        continue;
      }
      any = true;
      Json j = Json::parse(read_file(path), nullptr, false);
      if (j.is_discarded()) {
        report.missing.push_back(path.filename().string() + " (unparseable)");
        continue;
      }
      std::string summary = j.at("summary").get<std::string>();
      pipeline::MetricSnapshot snapshot;
      text::TokenizedText tokenized = text::tokenize(summary, tokenizer);
      if (tokenized.sentence_count() == 0) continue;
      snapshot.readability = text::readability_report(tokenized, familiar_words);
      if (!record.reference.empty()) {
        snapshot.rouge = text::rouge1(summary, record.reference);
      }
      per_round[round].push_back(snapshot);
    }
    if (!any) {
      report.missing.push_back(pipeline::artifact_file_name(record.id, 0));
    }
  }

  std::filesystem::path manifest_path = artifact_dir / "run.json";
  if (std::filesystem::exists(manifest_path)) {
    Json manifest = Json::parse(read_file(manifest_path), nullptr, false);
    if (!manifest.is_discarded() && manifest.contains("config")) {
      report.config_echo = manifest["config"];
    }
  }

  for (const auto& [round, snapshots] : per_round) {
    RoundMeans means;
    for (const auto& snapshot : snapshots) {
      means.fkgl += snapshot.readability.fkgl;
      means.dcrs += snapshot.readability.dcrs;
      means.cli += snapshot.readability.cli;
      means.ari += snapshot.readability.ari;
      ++means.document_count;
      if (snapshot.rouge) {
        means.rouge1_f1 += snapshot.rouge->f1 * 100.0;
        ++means.rouge_docs;
      }
    }
    if (means.document_count > 0) {
      auto docs = static_cast<double>(means.document_count);
      means.fkgl /= docs;
      means.dcrs /= docs;
      means.cli /= docs;
      means.ari /= docs;
    }
    if (means.rouge_docs > 0) {
      means.rouge1_f1 /= static_cast<double>(means.rouge_docs);
    }
    report.rounds[round] = means;
  }
  return report;
}

enum class TableFormat { Csv, Markdown };

namespace detail {

inline std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

inline std::string round_label(int round) {
  return round == 0 ? std::string("Initial") : "Round " + std::to_string(round);
}

}  // namespace detail

/// Paper-style table: one row per metric, one column per round, numeric
/// cells fixed to two decimals. ROUGE appears only when references existed.
inline std::string emit_table(const EvalReport& report, TableFormat format) {
  if (report.rounds.empty()) throw Error("cannot emit a table for an empty report");

  std::vector<int> rounds;
  for (const auto& [round, means] : report.rounds) rounds.push_back(round);
  bool any_rouge = false;
  for (const auto& [round, means] : report.rounds) {
    if (means.rouge_docs > 0) any_rouge = true;
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  auto metric_row = [&](const std::string& name, auto getter) {
    std::vector<std::string> cells;
    for (int round : rounds) cells.push_back(detail::fixed2(getter(report.rounds.at(round))));
    rows.emplace_back(name, std::move(cells));
  };
  if (any_rouge) {
    metric_row("ROUGE-1", [](const RoundMeans& m) { return m.rouge1_f1; });
  }
  metric_row("FKGL", [](const RoundMeans& m) { return m.fkgl; });
  metric_row("DCRS", [](const RoundMeans& m) { return m.dcrs; });
  metric_row("CLI", [](const RoundMeans& m) { return m.cli; });
  metric_row("ARI", [](const RoundMeans& m) { return m.ari; });

  std::string out;
  if (format == TableFormat::Csv) {
    out += "dataset,metric";
    for (int round : rounds) out += "," + detail::round_label(round);
    out += "\n";
    for (const auto& [name, cells] : rows) {
      out += report.dataset_name + "," + name;
      for (const auto& cell : cells) out += "," + cell;
      out += "\n";
    }
  } else {
    out += "| Metric |";
    for (int round : rounds) out += " " + detail::round_label(round) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < rounds.size(); ++i) out += "---|";
    out += "\n";
    for (const auto& [name, cells] : rows) {
      out += "| " + name + " |";
      for (const auto& cell : cells) out += " " + cell + " |";
      out += "\n";
    }
  }
  return out;
}

/// JSON-lines export {id, round, candidate, reference, source} so external
/// (neural) scorers can consume round outputs without this engine embedding
/// any model.
inline void export_for_external_scorers(const std::filesystem::path& artifact_dir,
                                        const std::vector<DatasetRecord>& records,
                                        const std::filesystem::path& out_path,
                                        int max_rounds = 16) {
  std::string out;
  for (const auto& record : records) {
    for (int round = 0; round <= max_rounds; ++round) {
      std::filesystem::path path =
          artifact_dir / pipeline::artifact_file_name(record.id, round);
      if (!std::filesystem::exists(path)) {
        if (round == 0) break;
        continue;
      }
      Json artifact = Json::parse(read_file(path), nullptr, false);
      if (artifact.is_discarded()) continue;
      out += Json{{"id", record.id},
                  {"round", round},
                  {"candidate", artifact.at("summary").get<std::string>()},
                  {"reference", record.reference},
                  {"source", record.text}}
                 .dump();
      out += "\n";
    }
  }
  write_file(out_path, out);
}

}  // namespace nrlb::eval
