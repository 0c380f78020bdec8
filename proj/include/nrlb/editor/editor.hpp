#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrlb/agents/proposals.hpp"
#include "nrlb/core/error.hpp"
#include "nrlb/core/hash.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::editor {

enum class EditStatus { Applied, SkippedAnchorMissing, SkippedOverlap, SkippedInsufficientInfo };

inline std::string to_string(EditStatus status) {
  switch (status) {
    case EditStatus::Applied: return "applied";
    case EditStatus::SkippedAnchorMissing: return "skipped_anchor_missing";
    case EditStatus::SkippedOverlap: return "skipped_overlap";
    case EditStatus::SkippedInsufficientInfo: return "skipped_insufficient_info";
  }
  return "applied";
}

inline EditStatus edit_status_from_string(const std::string& s) {
  if (s == "applied") return EditStatus::Applied;
  if (s == "skipped_anchor_missing") return EditStatus::SkippedAnchorMissing;
  if (s == "skipped_overlap") return EditStatus::SkippedOverlap;
  if (s == "skipped_insufficient_info") return EditStatus::SkippedInsufficientInfo;
  throw Error("unknown edit status: " + s);
}

struct PlannedEdit {
  std::size_t proposal_index = 0;
  strings::Span anchor;  // span in the plan-time summary
};

/// Conflict-free application order for a specific summary text. The plan
/// owns a copy of the proposals, records which were excluded and why, and
/// carries the summary hash that apply_edits checks.
struct EditPlan {
  std::string summary_hash;
  std::vector<agents::RevisionProposal> proposals;
  std::vector<PlannedEdit> edits;  // ascending anchor position, disjoint spans
  std::vector<std::pair<std::size_t, EditStatus>> skipped;
};

struct EditOutcome {
  std::size_t proposal_index = 0;
  agents::RevisionKind kind = agents::RevisionKind::ReplaceTerm;
  std::string original;
  std::string replacement;
  EditStatus status = EditStatus::Applied;
  std::optional<strings::Span> pre_span;   // anchor in the pre-edit summary
  std::optional<strings::Span> post_span;  // replacement span in the final text

  bool operator==(const EditOutcome&) const = default;
};

/// Anchors every proposal at the first whitespace-normalized occurrence of
/// its original span. Proposals without an anchor are excluded
/// (SkippedAnchorMissing); when anchors overlap the longer span wins and the
/// loser is excluded (SkippedOverlap); InsufficientInformation is never
/// planned.
inline EditPlan plan_edits(const std::string& summary,
                           const std::vector<agents::RevisionProposal>& proposals) {
  EditPlan plan;
  plan.summary_hash = content_hash(summary);
  plan.proposals = proposals;

  std::vector<PlannedEdit> candidates;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    const auto& proposal = proposals[i];
    if (proposal.kind == agents::RevisionKind::InsufficientInformation) {
      plan.skipped.emplace_back(i, EditStatus::SkippedInsufficientInfo);
      continue;
    }
    auto span = strings::find_normalized(summary, proposal.original);
    if (!span) {
      plan.skipped.emplace_back(i, EditStatus::SkippedAnchorMissing);
      continue;
    }
    candidates.push_back({i, *span});
  }

  // Longer spans claim their region first; ties go to the earlier span,
  // then the earlier proposal.
  std::sort(candidates.begin(), candidates.end(), [](const PlannedEdit& a, const PlannedEdit& b) {
    if (a.anchor.length() != b.anchor.length()) return a.anchor.length() > b.anchor.length();
    if (a.anchor.begin != b.anchor.begin) return a.anchor.begin < b.anchor.begin;
    return a.proposal_index < b.proposal_index;
  });
  std::vector<PlannedEdit> accepted;
  for (const auto& candidate : candidates) {
    bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const PlannedEdit& e) {
      return e.anchor.overlaps(candidate.anchor);
    });
    if (overlaps) {
      plan.skipped.emplace_back(candidate.proposal_index, EditStatus::SkippedOverlap);
    } else {
      accepted.push_back(candidate);
    }
  }
  std::sort(accepted.begin(), accepted.end(), [](const PlannedEdit& a, const PlannedEdit& b) {
    return a.anchor.begin < b.anchor.begin;
  });
  plan.edits = std::move(accepted);
  return plan;
}

/// Applies the plan sequentially, re-anchoring each edit against the current
/// text (searching forward from the previous edit) before replacing. An edit
/// whose anchor vanished is demoted to SkippedAnchorMissing. Returns the
/// final text and one outcome per original proposal.
inline std::pair<std::string, std::vector<EditOutcome>> apply_edits(const std::string& summary,
                                                                    const EditPlan& plan) {
  if (content_hash(summary) != plan.summary_hash) {
    throw StalePlanError("edit plan was built from a different summary text");
  }

  std::vector<EditOutcome> outcomes(plan.proposals.size());
  for (std::size_t i = 0; i < plan.proposals.size(); ++i) {
    const auto& proposal = plan.proposals[i];
    outcomes[i].proposal_index = i;
    outcomes[i].kind = proposal.kind;
    outcomes[i].original = proposal.original;
    outcomes[i].replacement = proposal.replacement;
  }
  for (const auto& [index, status] : plan.skipped) {
    outcomes[index].status = status;
  }

  std::string current = summary;
  std::size_t search_from = 0;
  for (const auto& edit : plan.edits) {
    const auto& proposal = plan.proposals[edit.proposal_index];
    EditOutcome& outcome = outcomes[edit.proposal_index];
    auto span = strings::find_normalized(current, proposal.original, search_from);
    if (!span) {
      outcome.status = EditStatus::SkippedAnchorMissing;
      continue;
    }
    current = current.substr(0, span->begin) + proposal.replacement + current.substr(span->end);
    outcome.status = EditStatus::Applied;
    outcome.pre_span = edit.anchor;
    outcome.post_span = strings::Span{span->begin, span->begin + proposal.replacement.size()};
    search_from = span->begin + proposal.replacement.size();
  }
  return {std::move(current), std::move(outcomes)};
}

}  // namespace nrlb::editor
