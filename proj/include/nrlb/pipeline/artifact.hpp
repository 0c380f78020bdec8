#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/agents/feedback.hpp"
#include "nrlb/agents/proposals.hpp"
#include "nrlb/checklist/checklist.hpp"
#include "nrlb/editor/editor.hpp"
#include "nrlb/gateway/types.hpp"
#include "nrlb/text/readability.hpp"
#include "nrlb/text/rouge.hpp"

namespace nrlb::pipeline {

using Json = nlohmann::json;

struct MetricSnapshot {
  text::ReadabilityReport readability;
  std::optional<text::RougeScore> rouge;  // present when a reference exists

  bool operator==(const MetricSnapshot&) const = default;
};

/// Complete record of one refinement round. Round 0 is the initial summary
/// and carries no feedback, checklist, proposals, or outcomes.
struct RoundArtifact {
  std::string doc_id;
  int round_index = 0;
  std::string summary;
  std::vector<agents::ReaderFeedback> feedbacks;
  checklist::Checklist checklist;
  std::vector<agents::RevisionProposal> proposals;
  std::vector<editor::EditOutcome> outcomes;
  MetricSnapshot metrics;
  std::vector<gateway::LedgerEntry> ledger_slice;
  std::string prompt_catalog_hash;

  bool operator==(const RoundArtifact&) const = default;
};

namespace detail {

inline Json span_to_json(const std::optional<strings::Span>& span) {
  if (!span) return nullptr;
  return Json{{"offset", span->begin}, {"length", span->length()}};
}

inline std::optional<strings::Span> span_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  std::size_t offset = j.at("offset").get<std::size_t>();
  std::size_t length = j.at("length").get<std::size_t>();
  return strings::Span{offset, offset + length};
}

inline Json outcome_to_json(const editor::EditOutcome& outcome) {
  return Json{{"kind", agents::to_string(outcome.kind)},
              {"original", outcome.original},
              {"replacement", outcome.replacement},
              {"status", editor::to_string(outcome.status)},
              {"pre_offset", span_to_json(outcome.pre_span)},
              {"post_offset", span_to_json(outcome.post_span)}};
}

inline editor::EditOutcome outcome_from_json(const Json& j, std::size_t index) {
  editor::EditOutcome outcome;
  outcome.proposal_index = index;
  outcome.kind = agents::revision_kind_from_string(j.at("kind").get<std::string>());
  outcome.original = j.at("original").get<std::string>();
  outcome.replacement = j.at("replacement").get<std::string>();
  outcome.status = editor::edit_status_from_string(j.at("status").get<std::string>());
  outcome.pre_span = span_from_json(j.at("pre_offset"));
  outcome.post_span = span_from_json(j.at("post_offset"));
  return outcome;
}

inline Json metrics_to_json(const MetricSnapshot& metrics) {
  Json j{{"fkgl", metrics.readability.fkgl},
         {"dcrs", metrics.readability.dcrs},
         {"cli", metrics.readability.cli},
         {"ari", metrics.readability.ari},
         {"word_count", metrics.readability.word_count},
         {"sentence_count", metrics.readability.sentence_count}};
  if (metrics.rouge) {
    j["rouge1"] = Json{{"precision", metrics.rouge->precision},
                       {"recall", metrics.rouge->recall},
                       {"f1", metrics.rouge->f1}};
  } else {
    j["rouge1"] = nullptr;
  }
  return j;
}

inline MetricSnapshot metrics_from_json(const Json& j) {
  MetricSnapshot metrics;
  metrics.readability.fkgl = j.at("fkgl").get<double>();
  metrics.readability.dcrs = j.at("dcrs").get<double>();
  metrics.readability.cli = j.at("cli").get<double>();
  metrics.readability.ari = j.at("ari").get<double>();
  metrics.readability.word_count = j.at("word_count").get<std::size_t>();
  metrics.readability.sentence_count = j.at("sentence_count").get<std::size_t>();
  if (!j.at("rouge1").is_null()) {
    text::RougeScore rouge;
    rouge.precision = j["rouge1"].at("precision").get<double>();
    rouge.recall = j["rouge1"].at("recall").get<double>();
    rouge.f1 = j["rouge1"].at("f1").get<double>();
    metrics.rouge = rouge;
  }
  return metrics;
}

}  // namespace detail

inline Json artifact_to_json(const RoundArtifact& artifact) {
  Json feedbacks = Json::array();
  for (const auto& feedback : artifact.feedbacks) {
    feedbacks.push_back(agents::reader_feedback_to_json(feedback));
  }
  Json proposals = Json::array();
  for (const auto& proposal : artifact.proposals) {
    proposals.push_back(agents::revision_proposal_to_json(proposal));
  }
  Json outcomes = Json::array();
  for (const auto& outcome : artifact.outcomes) {
    outcomes.push_back(detail::outcome_to_json(outcome));
  }
  Json ledger = Json::array();
  for (const auto& entry : artifact.ledger_slice) {
    ledger.push_back(Json{{"agent_role", entry.agent_role},
                          {"round_index", entry.round_index},
                          {"request_hash", entry.request_hash},
                          {"response_hash", entry.response_hash}});
  }
  return Json{{"doc_id", artifact.doc_id},
              {"round_index", artifact.round_index},
              {"summary", artifact.summary},
              {"feedbacks", std::move(feedbacks)},
              {"checklist", checklist::checklist_to_json(artifact.checklist)},
              {"proposals", std::move(proposals)},
              {"outcomes", std::move(outcomes)},
              {"metrics", detail::metrics_to_json(artifact.metrics)},
              {"ledger_slice", std::move(ledger)},
              {"prompt_catalog_hash", artifact.prompt_catalog_hash}};
}

inline RoundArtifact artifact_from_json(const Json& j) {
  RoundArtifact artifact;
  artifact.doc_id = j.at("doc_id").get<std::string>();
  artifact.round_index = j.at("round_index").get<int>();
  artifact.summary = j.at("summary").get<std::string>();
  for (const auto& entry : j.at("feedbacks")) {
    artifact.feedbacks.push_back(agents::reader_feedback_from_json(entry));
  }
  artifact.checklist = checklist::checklist_from_json(j.at("checklist"));
  for (const auto& entry : j.at("proposals")) {
    artifact.proposals.push_back(agents::revision_proposal_from_json(entry));
  }
  std::size_t index = 0;
  for (const auto& entry : j.at("outcomes")) {
    artifact.outcomes.push_back(detail::outcome_from_json(entry, index++));
  }
  artifact.metrics = detail::metrics_from_json(j.at("metrics"));
  for (const auto& entry : j.at("ledger_slice")) {
    artifact.ledger_slice.push_back({entry.at("agent_role").get<std::string>(),
                                     entry.at("round_index").get<int>(),
                                     entry.at("request_hash").get<std::string>(),
                                     entry.at("response_hash").get<std::string>()});
  }
  artifact.prompt_catalog_hash = j.at("prompt_catalog_hash").get<std::string>();
  return artifact;
}

/// Artifact file name: {doc_id}.initial.json for round 0, otherwise
/// {doc_id}.round{r}.json. Ids are sanitized for the filesystem.
inline std::string sanitize_doc_id(const std::string& doc_id) {
  std::string out;
  out.reserve(doc_id.size());
  for (char c : doc_id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "doc" : out;
}

inline std::string artifact_file_name(const std::string& doc_id, int round_index) {
  std::string base = sanitize_doc_id(doc_id);
  if (round_index == 0) return base + ".initial.json";
  return base + ".round" + std::to_string(round_index) + ".json";
}

}  // namespace nrlb::pipeline
