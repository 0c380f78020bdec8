#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nrlb/core/error.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::agents {

using Json = nlohmann::json;

struct FeedbackItem {
  std::string excerpt;
  std::string comment;
  /// True iff the excerpt occurs verbatim (after whitespace normalization)
  /// in the summary it critiques.
  bool anchored = false;

  bool operator==(const FeedbackItem&) const = default;
};

/// One persona's flagged items across the three barrier categories. The
/// category set is fixed: unknown terms, missing contexts, confusing
/// sentences.
struct ReaderFeedback {
  std::string persona_id;
  std::vector<FeedbackItem> unknown_terms;
  std::vector<FeedbackItem> missing_contexts;
  std::vector<FeedbackItem> confusing_sentences;

  bool operator==(const ReaderFeedback&) const = default;
};

inline const std::vector<std::string>& feedback_category_keys() {
  static const std::vector<std::string> keys = {"unknown_terms", "missing_contexts",
                                                "confusing_sentences"};
  return keys;
}

namespace detail {

inline std::vector<FeedbackItem> parse_feedback_items(const Json& payload,
                                                      const std::string& key,
                                                      const std::string& summary,
                                                      const std::string& persona_id,
                                                      Warnings* warnings) {
  std::vector<FeedbackItem> items;
  if (!payload.contains(key)) {
    warn(warnings, "reader " + persona_id + ": category '" + key +
                       "' absent from feedback, defaulting to empty");
    return items;
  }
  const Json& list = payload.at(key);
  if (!list.is_array()) {
    throw SchemaViolationError("reader feedback category '" + key + "' is not an array");
  }
  for (const Json& entry : list) {
    if (!entry.is_object() || !entry.contains("excerpt") || !entry["excerpt"].is_string()) {
      throw SchemaViolationError("reader feedback item in '" + key +
                                 "' is missing a string excerpt");
    }
    FeedbackItem item;
    item.excerpt = entry["excerpt"].get<std::string>();
    item.comment = entry.value("comment", std::string{});
    item.anchored = strings::contains_normalized(summary, item.excerpt);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace detail

/// Parses the shared reader JSON schema and computes anchored flags against
/// the summary. An absent category defaults to empty with a warning; any
/// other shape problem is a SchemaViolationError.
inline ReaderFeedback parse_reader_feedback(const Json& payload, const std::string& persona_id,
                                            const std::string& summary,
                                            Warnings* warnings = nullptr) {
  if (!payload.is_object()) {
    throw SchemaViolationError("reader feedback payload is not a JSON object");
  }
  ReaderFeedback feedback;
  feedback.persona_id = persona_id;
  feedback.unknown_terms =
      detail::parse_feedback_items(payload, "unknown_terms", summary, persona_id, warnings);
  feedback.missing_contexts =
      detail::parse_feedback_items(payload, "missing_contexts", summary, persona_id, warnings);
  feedback.confusing_sentences =
      detail::parse_feedback_items(payload, "confusing_sentences", summary, persona_id, warnings);
  return feedback;
}

inline Json feedback_item_to_json(const FeedbackItem& item) {
  return Json{{"excerpt", item.excerpt}, {"comment", item.comment}, {"anchored", item.anchored}};
}

inline FeedbackItem feedback_item_from_json(const Json& j) {
  return FeedbackItem{j.at("excerpt").get<std::string>(), j.at("comment").get<std::string>(),
                      j.at("anchored").get<bool>()};
}

inline Json reader_feedback_to_json(const ReaderFeedback& feedback) {
  auto items = [](const std::vector<FeedbackItem>& list) {
    Json arr = Json::array();
    for (const auto& item : list) arr.push_back(feedback_item_to_json(item));
    return arr;
  };
  return Json{{"persona", feedback.persona_id},
              {"unknown_terms", items(feedback.unknown_terms)},
              {"missing_contexts", items(feedback.missing_contexts)},
              {"confusing_sentences", items(feedback.confusing_sentences)}};
}

inline ReaderFeedback reader_feedback_from_json(const Json& j) {
  auto items = [](const Json& arr) {
    std::vector<FeedbackItem> out;
    for (const auto& entry : arr) out.push_back(feedback_item_from_json(entry));
    return out;
  };
  ReaderFeedback feedback;
  feedback.persona_id = j.at("persona").get<std::string>();
  feedback.unknown_terms = items(j.at("unknown_terms"));
  feedback.missing_contexts = items(j.at("missing_contexts"));
  feedback.confusing_sentences = items(j.at("confusing_sentences"));
  return feedback;
}

}  // namespace nrlb::agents
