#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/agents/feedback.hpp"
#include "nrlb/core/strings.hpp"
#include "nrlb/text/readability.hpp"
#include "nrlb/text/tokenizer.hpp"

namespace nrlb::checklist {

using Json = nlohmann::json;

enum class IssueCategory { UnknownTerm, MissingContext, ConfusingSentence };

inline std::string to_string(IssueCategory c) {
  switch (c) {
    case IssueCategory::UnknownTerm: return "unknown_terms";
    case IssueCategory::MissingContext: return "missing_contexts";
    case IssueCategory::ConfusingSentence: return "confusing_sentences";
  }
  return "unknown_terms";
}

inline IssueCategory issue_category_from_string(const std::string& s) {
  if (s == "unknown_terms") return IssueCategory::UnknownTerm;
  if (s == "missing_contexts") return IssueCategory::MissingContext;
  if (s == "confusing_sentences") return IssueCategory::ConfusingSentence;
  throw Error("unknown issue category: " + s);
}

/// One deduplicated issue. position is the byte offset of the excerpt's
/// first occurrence in the summary, which makes ordering independent of the
/// order feedback lists arrive in.
struct Issue {
  IssueCategory category = IssueCategory::UnknownTerm;
  std::string excerpt;
  std::string normalized_key;
  std::set<std::string> flaggers;
  double ari_difficulty = 0.0;
  std::size_t position = 0;

  std::size_t flag_count() const { return flaggers.size(); }

  bool operator==(const Issue&) const = default;
};

/// Priority order within a category: more flaggers first, then harder
/// enclosing sentences (ARI), then earlier position in the summary.
inline bool issue_before(const Issue& a, const Issue& b) {
  if (a.flag_count() != b.flag_count()) return a.flag_count() > b.flag_count();
  if (a.ari_difficulty != b.ari_difficulty) return a.ari_difficulty > b.ari_difficulty;
  return a.position < b.position;
}

struct Checklist {
  int k = 3;
  std::vector<Issue> unknown_terms;
  std::vector<Issue> missing_contexts;
  std::vector<Issue> confusing_sentences;

  bool empty() const {
    return unknown_terms.empty() && missing_contexts.empty() && confusing_sentences.empty();
  }

  std::size_t total_issues() const {
    return unknown_terms.size() + missing_contexts.size() + confusing_sentences.size();
  }

  const std::vector<Issue>& category(IssueCategory c) const {
    switch (c) {
      case IssueCategory::UnknownTerm: return unknown_terms;
      case IssueCategory::MissingContext: return missing_contexts;
      case IssueCategory::ConfusingSentence: return confusing_sentences;
    }
    return unknown_terms;
  }

  bool operator==(const Checklist&) const = default;
};

/// First tokenized sentence of the summary containing the whitespace-
/// normalized excerpt; none when the excerpt is absent or spans a sentence
/// boundary.
inline std::optional<std::string> enclosing_sentence(
    const std::string& summary, const std::string& excerpt,
    const text::TokenizerOptions& tokenizer = text::TokenizerOptions{}) {
  for (const auto& sentence : text::tokenize(summary, tokenizer).sentences) {
    if (strings::contains_normalized(sentence.text, excerpt)) return sentence.text;
  }
  return std::nullopt;
}

namespace detail {

struct IssueDraft {
  std::map<std::size_t, std::string> excerpt_by_position;  // candidate representatives
  std::set<std::string> flaggers;
};

inline void collect(std::map<std::string, IssueDraft>& drafts, const std::string& summary,
                    const std::vector<agents::FeedbackItem>& items,
                    const std::string& persona_id, const char* category_name,
                    Warnings* warnings) {
  for (const auto& item : items) {
    auto span = strings::find_normalized(summary, item.excerpt);
    if (!span) {
      warn(warnings, std::string("dropping unanchored ") + category_name + " item from " +
                         persona_id + ": \"" + item.excerpt + "\"");
      continue;
    }
    IssueDraft& draft = drafts[strings::normalized_key(item.excerpt)];
    draft.flaggers.insert(persona_id);
    auto [it, inserted] = draft.excerpt_by_position.emplace(span->begin, item.excerpt);
    if (!inserted && item.excerpt < it->second) {
      it->second = item.excerpt;  // deterministic representative on position ties
    }
  }
}

inline std::vector<Issue> finalize(std::map<std::string, IssueDraft>& drafts,
                                   IssueCategory category, const std::string& summary,
                                   int k, const text::TokenizerOptions& tokenizer) {
  std::vector<Issue> issues;
  issues.reserve(drafts.size());
  for (auto& [key, draft] : drafts) {
    Issue issue;
    issue.category = category;
    issue.normalized_key = key;
    issue.flaggers = std::move(draft.flaggers);
    // Representative excerpt: the earliest occurrence in the summary.
    issue.position = draft.excerpt_by_position.begin()->first;
    issue.excerpt = draft.excerpt_by_position.begin()->second;
    if (auto sentence = enclosing_sentence(summary, issue.excerpt, tokenizer)) {
      issue.ari_difficulty = text::ari_of(*sentence, tokenizer);
    } else {
      issue.ari_difficulty = text::ari_of(issue.excerpt, tokenizer);
    }
    issues.push_back(std::move(issue));
  }
  std::sort(issues.begin(), issues.end(), issue_before);
  if (issues.size() > static_cast<std::size_t>(k)) issues.resize(static_cast<std::size_t>(k));
  return issues;
}

}  // namespace detail

/// Merges per-persona feedback into the top-K checklist per category.
/// Items are merged by case-folded, whitespace-collapsed excerpt equality;
/// unanchored items are dropped with a warning. The result is independent of
/// the order feedback lists are supplied in.
inline Checklist aggregate(const std::vector<agents::ReaderFeedback>& feedbacks,
                           const std::string& summary, int k,
                           const text::TokenizerOptions& tokenizer = text::TokenizerOptions{},
                           Warnings* warnings = nullptr) {
  if (k < 1) throw Error("checklist K must be >= 1");
  std::map<std::string, detail::IssueDraft> unknown, missing, confusing;
  for (const auto& feedback : feedbacks) {
    detail::collect(unknown, summary, feedback.unknown_terms, feedback.persona_id,
                    "unknown_terms", warnings);
    detail::collect(missing, summary, feedback.missing_contexts, feedback.persona_id,
                    "missing_contexts", warnings);
    detail::collect(confusing, summary, feedback.confusing_sentences, feedback.persona_id,
                    "confusing_sentences", warnings);
  }
  Checklist checklist;
  checklist.k = k;
  checklist.unknown_terms =
      detail::finalize(unknown, IssueCategory::UnknownTerm, summary, k, tokenizer);
  checklist.missing_contexts =
      detail::finalize(missing, IssueCategory::MissingContext, summary, k, tokenizer);
  checklist.confusing_sentences =
      detail::finalize(confusing, IssueCategory::ConfusingSentence, summary, k, tokenizer);
  return checklist;
}

inline Json issue_to_json(const Issue& issue) {
  Json flaggers = Json::array();
  for (const auto& f : issue.flaggers) flaggers.push_back(f);
  return Json{{"excerpt", issue.excerpt},
              {"flag_count", issue.flag_count()},
              {"flaggers", std::move(flaggers)},
              {"ari", issue.ari_difficulty},
              {"position", issue.position}};
}

inline Issue issue_from_json(const Json& j, IssueCategory category) {
  Issue issue;
  issue.category = category;
  issue.excerpt = j.at("excerpt").get<std::string>();
  issue.normalized_key = strings::normalized_key(issue.excerpt);
  for (const auto& f : j.at("flaggers")) issue.flaggers.insert(f.get<std::string>());
  issue.ari_difficulty = j.at("ari").get<double>();
  issue.position = j.at("position").get<std::size_t>();
  return issue;
}

inline Json checklist_to_json(const Checklist& checklist) {
  auto items = [](const std::vector<Issue>& issues) {
    Json arr = Json::array();
    for (const auto& issue : issues) arr.push_back(issue_to_json(issue));
    return arr;
  };
  return Json{{"k", checklist.k},
              {"unknown_terms", items(checklist.unknown_terms)},
              {"missing_contexts", items(checklist.missing_contexts)},
              {"confusing_sentences", items(checklist.confusing_sentences)}};
}

inline Checklist checklist_from_json(const Json& j) {
  auto items = [](const Json& arr, IssueCategory category) {
    std::vector<Issue> out;
    for (const auto& entry : arr) out.push_back(issue_from_json(entry, category));
    return out;
  };
  Checklist checklist;
  checklist.k = j.at("k").get<int>();
  checklist.unknown_terms = items(j.at("unknown_terms"), IssueCategory::UnknownTerm);
  checklist.missing_contexts = items(j.at("missing_contexts"), IssueCategory::MissingContext);
  checklist.confusing_sentences =
      items(j.at("confusing_sentences"), IssueCategory::ConfusingSentence);
  return checklist;
}

/// Checklist as shown to the expert: every item carries a short id
/// ("UT1", "MC2", "CS1") the expert echoes back in source_issue.
inline Json checklist_prompt_json(const Checklist& checklist) {
  auto items = [](const std::vector<Issue>& issues, const char* prefix) {
    Json arr = Json::array();
    int n = 1;
    for (const auto& issue : issues) {
      arr.push_back(Json{{"id", prefix + std::to_string(n++)},
                         {"excerpt", issue.excerpt},
                         {"flag_count", issue.flag_count()}});
    }
    return arr;
  };
  return Json{{"unknown_terms", items(checklist.unknown_terms, "UT")},
              {"missing_contexts", items(checklist.missing_contexts, "MC")},
              {"confusing_sentences", items(checklist.confusing_sentences, "CS")}};
}

}  // namespace nrlb::checklist
