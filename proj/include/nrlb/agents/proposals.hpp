#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/core/error.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::agents {

using Json = nlohmann::json;

enum class RevisionKind { ReplaceTerm, AddContext, RewriteSentence, InsufficientInformation };

inline std::string to_string(RevisionKind kind) {
  switch (kind) {
    case RevisionKind::ReplaceTerm: return "replace_term";
    case RevisionKind::AddContext: return "add_context";
    case RevisionKind::RewriteSentence: return "rewrite_sentence";
    case RevisionKind::InsufficientInformation: return "insufficient_information";
  }
  return "replace_term";
}

/// Tolerant of case and separators ("replace_term", "ReplaceTerm", ...).
inline RevisionKind revision_kind_from_string(const std::string& s) {
  std::string key;
  for (char c : s) {
    if (strings::is_alpha(c)) key.push_back(strings::to_lower(c));
  }
  if (key == "replaceterm") return RevisionKind::ReplaceTerm;
  if (key == "addcontext") return RevisionKind::AddContext;
  if (key == "rewritesentence") return RevisionKind::RewriteSentence;
  if (key == "insufficientinformation") return RevisionKind::InsufficientInformation;
  throw SchemaViolationError("unknown revision kind: " + s);
}

/// Word bounds from the revision rules: a replacement definition may use at
/// most 5 words, a context addition at most 15.
inline constexpr std::size_t kReplaceTermWordBound = 5;
inline constexpr std::size_t kAddContextWordBound = 15;

/// A typed edit anchored to a span of the current summary. replacement is
/// empty for InsufficientInformation. bound_truncated records that an
/// over-length replacement was cut at its word bound.
struct RevisionProposal {
  RevisionKind kind = RevisionKind::ReplaceTerm;
  std::string original;
  std::string replacement;
  std::string rationale;
  std::string source_issue;
  bool bound_truncated = false;

  bool operator==(const RevisionProposal&) const = default;
};

/// Applies the per-kind constraints even when the model violated them:
/// over-length ReplaceTerm/AddContext replacements are truncated at the word
/// bound and flagged; InsufficientInformation replacements are forced empty;
/// a RewriteSentence whose sentences are not all shorter than the original
/// only draws a warning.
inline void enforce_bounds(RevisionProposal& proposal, Warnings* warnings = nullptr) {
  switch (proposal.kind) {
    case RevisionKind::ReplaceTerm:
      if (strings::count_words(proposal.replacement) > kReplaceTermWordBound) {
        proposal.replacement =
            strings::truncate_words(proposal.replacement, kReplaceTermWordBound);
        proposal.bound_truncated = true;
        warn(warnings, "replace_term replacement truncated to 5 words: " + proposal.original);
      }
      break;
    case RevisionKind::AddContext:
      if (strings::count_words(proposal.replacement) > kAddContextWordBound) {
        proposal.replacement =
            strings::truncate_words(proposal.replacement, kAddContextWordBound);
        proposal.bound_truncated = true;
        warn(warnings, "add_context replacement truncated to 15 words: " + proposal.original);
      }
      break;
    case RevisionKind::RewriteSentence: {
      // Check each rewritten sentence against the original's word count.
      std::size_t original_words = strings::count_words(proposal.original);
      std::size_t start = 0;
      const std::string& r = proposal.replacement;
      while (start < r.size()) {
        std::size_t end = r.find_first_of(".!?", start);
        if (end == std::string::npos) end = r.size();
        std::size_t words = strings::count_words(std::string_view(r).substr(start, end - start));
        if (words > 0 && words >= original_words) {
          warn(warnings,
               "rewrite_sentence piece is not shorter than the original: " + proposal.original);
          break;
        }
        start = end + 1;
      }
      break;
    }
    case RevisionKind::InsufficientInformation:
      proposal.replacement.clear();
      break;
  }
}

/// Parses {"revisions": [...]} (a bare array is also accepted). An empty
/// list is valid and only draws a warning.
inline std::vector<RevisionProposal> parse_revision_proposals(const Json& payload,
                                                              Warnings* warnings = nullptr) {
  const Json* list = nullptr;
  if (payload.is_array()) {
    list = &payload;
  } else if (payload.is_object() && payload.contains("revisions") &&
             payload["revisions"].is_array()) {
    list = &payload["revisions"];
  } else {
    throw SchemaViolationError("revision payload has no 'revisions' array");
  }
  std::vector<RevisionProposal> proposals;
  for (const Json& entry : *list) {
    if (!entry.is_object() || !entry.contains("kind") || !entry["kind"].is_string() ||
        !entry.contains("original") || !entry["original"].is_string()) {
      throw SchemaViolationError("revision item is missing 'kind' or 'original'");
    }
    RevisionProposal proposal;
    proposal.kind = revision_kind_from_string(entry["kind"].get<std::string>());
    proposal.original = entry["original"].get<std::string>();
    proposal.replacement = entry.value("replacement", std::string{});
    proposal.rationale = entry.value("rationale", std::string{});
    proposal.source_issue = entry.value("source_issue", std::string{});
    enforce_bounds(proposal, warnings);
    proposals.push_back(std::move(proposal));
  }
  if (proposals.empty()) {
    warn(warnings, "expert returned zero revision proposals");
  }
  return proposals;
}

inline Json revision_proposal_to_json(const RevisionProposal& p) {
  return Json{{"kind", to_string(p.kind)},       {"original", p.original},
              {"replacement", p.replacement},    {"rationale", p.rationale},
              {"source_issue", p.source_issue},  {"truncated", p.bound_truncated}};
}

inline RevisionProposal revision_proposal_from_json(const Json& j) {
  RevisionProposal p;
  p.kind = revision_kind_from_string(j.at("kind").get<std::string>());
  p.original = j.at("original").get<std::string>();
  p.replacement = j.at("replacement").get<std::string>();
  p.rationale = j.at("rationale").get<std::string>();
  p.source_issue = j.at("source_issue").get<std::string>();
  p.bound_truncated = j.at("truncated").get<bool>();
  return p;
}

}  // namespace nrlb::agents
