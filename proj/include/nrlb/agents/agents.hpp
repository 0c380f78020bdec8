#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nrlb/agents/feedback.hpp"
#include "nrlb/agents/genre.hpp"
#include "nrlb/agents/personas.hpp"
#include "nrlb/agents/prompt_catalog.hpp"
#include "nrlb/agents/proposals.hpp"
#include "nrlb/checklist/checklist.hpp"
#include "nrlb/core/error.hpp"
#include "nrlb/gateway/gateway.hpp"
#include "nrlb/gateway/json_extract.hpp"

namespace nrlb::agents {

/// Decoding settings shared by every agent call. Defaults follow
/// deterministic decoding; reasoning-mode models override the temperature.
struct ModelSettings {
  std::string model_id = "gpt-4o";
  double temperature = 0.0;
  double top_p = 0.95;
  int top_k = 20;
  int max_tokens = 4096;

  static ModelSettings for_reasoning_model(std::string model_id) {
    ModelSettings s;
    s.model_id = std::move(model_id);
    s.temperature = 0.6;
    return s;
  }
};

struct AgentContext {
  gateway::LlmGateway& gw;
  const PromptCatalog& catalog;
  ModelSettings model;
};

namespace detail {

inline gateway::ChatRequest make_request(const ModelSettings& model, std::string prompt) {
  gateway::ChatRequest request;
  request.model_id = model.model_id;
  request.temperature = model.temperature;
  request.top_p = model.top_p;
  request.top_k = model.top_k;
  request.max_tokens = model.max_tokens;
  request.messages.push_back({gateway::Role::User, std::move(prompt)});
  return request;
}

/// Runs `parse` on reply content, folding JSON field-type surprises into the
/// schema-violation error class.
template <typename Parse>
auto parse_checked(Parse&& parse, const std::string& content) {
  try {
    return parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolationError(std::string("malformed JSON field: ") + e.what());
  }
}

/// Runs a call whose reply must parse into JSON and survive validation.
/// On the first failure the model gets one corrective reprompt; the second
/// failure raises SchemaViolationError.
template <typename Parse>
auto complete_with_reprompt(AgentContext& ctx, gateway::ChatRequest request,
                            const gateway::CallTag& tag, Parse&& parse) {
  gateway::ChatResponse response = ctx.gw.complete(request, tag);
  try {
    return parse_checked(parse, response.content);
  } catch (const Error& first_error) {
    request.messages.push_back({gateway::Role::Assistant, response.content});
    request.messages.push_back(
        {gateway::Role::User,
         "Your previous reply was not valid. Respond with exactly one JSON object that "
         "conforms to the requested schema, and nothing else."});
    gateway::ChatResponse retry = ctx.gw.complete(request, tag);
    try {
      return parse_checked(parse, retry.content);
    } catch (const Error& second_error) {
      throw SchemaViolationError(std::string("agent '") + tag.agent_role +
                                 "' failed schema validation after one reprompt: " +
                                 second_error.what());
    }
  }
}

}  // namespace detail

/// Planner: four-way genre classification plus expert assignment. A missing
/// expert field falls back to the fixed genre-expert mapping; a label
/// outside the four types is an UnknownLabelError.
inline std::pair<Genre, ExpertRole> classify_genre(const std::string& document_text,
                                                   AgentContext& ctx, int round_index = 0,
                                                   Warnings* warnings = nullptr) {
  if (strings::trim(document_text).empty()) {
    throw Error("cannot classify an empty document");
  }
  std::string prompt = ctx.catalog.render("planner", {{"document", document_text}});
  gateway::CallTag tag{"planner", round_index};
  auto parsed = detail::complete_with_reprompt(
      ctx, detail::make_request(ctx.model, std::move(prompt)), tag,
      [](const std::string& content) {
        Json j = gateway::extract_json(content);
        if (!j.is_object() || !j.contains("document_type") ||
            !j["document_type"].is_string()) {
          throw SchemaViolationError("planner reply lacks a document_type string");
        }
        return j;
      });
  Genre genre = parse_genre(parsed["document_type"].get<std::string>());
  ExpertRole expert;
  if (parsed.contains("expert") && parsed["expert"].is_string()) {
    expert = parse_expert(parsed["expert"].get<std::string>());
  } else {
    expert = expert_for(genre);
    warn(warnings, "planner omitted the expert field; using the fixed genre mapping");
  }
  return {genre, expert};
}

struct DraftOptions {
  std::string examples_text;  // few-shot examples; user-supplied via config
  int max_sentences = 12;
};

/// Domain expert in draft mode: fills the genre template into one paragraph.
inline std::string draft_initial_summary(const std::string& document_text, Genre genre,
                                         ExpertRole expert, AgentContext& ctx,
                                         const DraftOptions& options = DraftOptions{},
                                         int round_index = 0, Warnings* warnings = nullptr) {
  const SummaryTemplate& tmpl = template_for(genre);
  std::string prompt = ctx.catalog.render(
      "expert_draft",
      {{"expert_persona", expert_persona_text(expert)},
       {"genre", to_string(genre)},
       {"template_slots", render_template_slots(tmpl)},
       {"guidelines", genre_guidelines(genre)},
       {"examples", options.examples_text.empty() ? std::string("(none provided)")
                                                  : options.examples_text},
       {"max_sentences", std::to_string(options.max_sentences)},
       {"document", document_text}});
  gateway::CallTag tag{"expert_draft", round_index};
  gateway::ChatResponse response =
      ctx.gw.complete(detail::make_request(ctx.model, std::move(prompt)), tag);
  if (response.truncated) {
    warn(warnings, "draft was cut off at the token limit");
  }
  std::string draft = std::string(strings::trim(response.content));
  if (draft.empty()) {
    throw EmptyDraftError("expert returned an empty draft");
  }
  return draft;
}

/// Reader agent: persona-conditioned barrier detection over the summary,
/// parsed into the shared three-category schema with anchored flags.
inline ReaderFeedback collect_feedback(const ReaderPersona& persona, const std::string& summary,
                                       AgentContext& ctx, int round_index,
                                       Warnings* warnings = nullptr) {
  if (strings::trim(summary).empty()) {
    throw Error("cannot collect feedback on an empty summary");
  }
  std::string prompt = ctx.catalog.render(persona.prompt_key, {{"summary", summary}});
  gateway::CallTag tag{persona.prompt_key, round_index};
  return detail::complete_with_reprompt(
      ctx, detail::make_request(ctx.model, std::move(prompt)), tag,
      [&](const std::string& content) {
        return parse_reader_feedback(gateway::extract_json(content), persona.id, summary,
                                     warnings);
      });
}

/// Domain expert in revise mode: turns the checklist into typed revision
/// proposals with the per-kind length bounds enforced. The source document
/// lets the expert ground added context and mark unsupported items
/// insufficient_information.
inline std::vector<RevisionProposal> propose_revisions(ExpertRole expert,
                                                       const std::string& summary,
                                                       const checklist::Checklist& checklist,
                                                       AgentContext& ctx, int round_index,
                                                       const std::string& source_text = {},
                                                       Warnings* warnings = nullptr,
                                                       const std::string& prior_checklists = {}) {
  if (checklist.empty()) {
    throw Error("cannot propose revisions for an empty checklist");
  }
  std::string prompt = ctx.catalog.render(
      "expert_revise",
      {{"expert_persona", expert_persona_text(expert)},
       {"summary", summary},
       {"checklist", checklist::checklist_prompt_json(checklist).dump(2)},
       {"prior_checklists",
        prior_checklists.empty() ? std::string("(none)") : prior_checklists},
       {"document", source_text.empty() ? std::string("(not provided)") : source_text}});
  gateway::CallTag tag{"expert_revise", round_index};
  return detail::complete_with_reprompt(
      ctx, detail::make_request(ctx.model, std::move(prompt)), tag,
      [&](const std::string& content) {
        return parse_revision_proposals(gateway::extract_json(content), warnings);
      });
}

/// Editor agent (llm mode): passes the planned revisions through the editor
/// prompt and returns the revised paragraph.
inline std::string edit_via_llm(const std::string& summary,
                                const std::vector<RevisionProposal>& planned_proposals,
                                AgentContext& ctx, int round_index,
                                Warnings* warnings = nullptr) {
  Json revisions = Json::array();
  for (const auto& proposal : planned_proposals) {
    revisions.push_back(Json{{"kind", to_string(proposal.kind)},
                             {"original", proposal.original},
                             {"replacement", proposal.replacement}});
  }
  std::string prompt = ctx.catalog.render(
      "editor", {{"summary", summary}, {"revisions", revisions.dump(2)}});
  gateway::CallTag tag{"editor", round_index};
  gateway::ChatResponse response =
      ctx.gw.complete(detail::make_request(ctx.model, std::move(prompt)), tag);
  std::string revised = std::string(strings::trim(response.content));
  if (revised.empty()) {
    warn(warnings, "editor returned empty text; keeping the previous summary");
    return summary;
  }
  return revised;
}

}  // namespace nrlb::agents
