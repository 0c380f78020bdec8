#pragma once

// Shared between the editor unit tests and the acceptance suite: a random
// proposal-set generator and a splice-based reference application.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "nrlb/editor/editor.hpp"

namespace nrlb_test {

inline nrlb::agents::RevisionProposal make_proposal(nrlb::agents::RevisionKind kind,
                                                    std::string original,
                                                    std::string replacement) {
  nrlb::agents::RevisionProposal p;
  p.kind = kind;
  p.original = std::move(original);
  p.replacement = std::move(replacement);
  return p;
}

/// Reference application: splice replacements at the recorded pre-edit
/// spans, ascending. Verifies conservation of unrelated text.
inline std::string splice_expected(const std::string& summary,
                                   const std::vector<nrlb::editor::EditOutcome>& outcomes) {
  std::vector<const nrlb::editor::EditOutcome*> applied;
  for (const auto& outcome : outcomes) {
    if (outcome.status == nrlb::editor::EditStatus::Applied) applied.push_back(&outcome);
  }
  std::sort(applied.begin(), applied.end(),
            [](const nrlb::editor::EditOutcome* a, const nrlb::editor::EditOutcome* b) {
              return a->pre_span->begin < b->pre_span->begin;
            });
  std::string out;
  std::size_t cursor = 0;
  for (const auto* outcome : applied) {
    out += summary.substr(cursor, outcome->pre_span->begin - cursor);
    out += outcome->replacement;
    cursor = outcome->pre_span->end;
  }
  out += summary.substr(cursor);
  return out;
}

struct EditorCase {
  std::string summary;
  std::vector<nrlb::agents::RevisionProposal> proposals;
};

inline EditorCase make_editor_case(std::mt19937& rng) {
  using nrlb::agents::RevisionKind;
  static const std::vector<std::string> vocab = {
      "alpha", "bravo", "charlie", "delta",   "echo",   "foxtrot", "golf",
      "hotel", "india", "juliet",  "kilo",    "lima",   "mike",    "november",
      "oscar", "papa",  "quebec",  "romeo",   "sierra", "tango"};
  std::uniform_int_distribution<int> sentence_count(3, 8);
  std::uniform_int_distribution<int> word_count(3, 12);
  std::uniform_int_distribution<std::size_t> word_pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);

  EditorCase c;
  int sentences = sentence_count(rng);
  for (int s = 0; s < sentences; ++s) {
    int words = word_count(rng);
    for (int w = 0; w < words; ++w) {
      c.summary += vocab[word_pick(rng)];
      c.summary += (coin(rng) == 0 ? " " : "  ");  // occasional double spaces
    }
    while (!c.summary.empty() && c.summary.back() == ' ') c.summary.pop_back();
    c.summary += ". ";
  }

  std::uniform_int_distribution<int> proposal_count(0, 8);
  std::uniform_int_distribution<int> kind_pick(0, 3);
  std::uniform_int_distribution<std::size_t> offset_pick(0, c.summary.size() - 1);
  int n = proposal_count(rng);
  for (int i = 0; i < n; ++i) {
    int kind_roll = kind_pick(rng);
    if (kind_roll == 3) {
      c.proposals.push_back(
          make_proposal(RevisionKind::InsufficientInformation, "whatever original", ""));
      continue;
    }
    auto kind = static_cast<RevisionKind>(kind_roll);
    if (coin(rng) == 0) {
      c.proposals.push_back(
          make_proposal(kind, "zebra" + std::to_string(i) + " missing", "filler"));
      continue;
    }
    std::size_t begin = offset_pick(rng);
    while (begin > 0 && c.summary[begin - 1] != ' ') --begin;
    std::size_t end = std::min(c.summary.size(), begin + 1 + offset_pick(rng) % 40);
    while (end < c.summary.size() && c.summary[end] != ' ') ++end;
    std::string original = c.summary.substr(begin, end - begin);
    if (nrlb::strings::collapse_whitespace(original).empty()) continue;
    std::string replacement;
    int replacement_words = coin(rng) == 0 ? 0 : 1 + kind_roll;
    for (int w = 0; w < replacement_words; ++w) {
      if (!replacement.empty()) replacement += " ";
      replacement += vocab[word_pick(rng)];
    }
    c.proposals.push_back(make_proposal(kind, original, replacement));
  }
  return c;
}

}  // namespace nrlb_test
