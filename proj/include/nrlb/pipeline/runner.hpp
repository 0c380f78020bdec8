#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nrlb/agents/agents.hpp"
#include "nrlb/agents/mock_agents.hpp"
#include "nrlb/gateway/cassette.hpp"
#include "nrlb/gateway/gateway.hpp"
#include "nrlb/gateway/http_backend.hpp"
#include "nrlb/pipeline/artifact.hpp"
#include "nrlb/pipeline/config.hpp"
#include "nrlb/pipeline/document.hpp"

namespace nrlb::pipeline {

/// Everything loaded once per run: word lists, prompt catalog, personas, and
/// the backend shared by all documents. Each document gets its own gateway
/// (and thus its own ledger) on top of the shared backend.
struct RunContext {
  RunConfig cfg;
  text::WordSet familiar_words;
  text::TokenizerOptions tokenizer;
  agents::PromptCatalog catalog;
  agents::PersonaRegistry personas;
  std::vector<agents::ReaderPersona> active_personas;
  std::shared_ptr<gateway::Backend> backend;
  agents::DraftOptions draft_options;
};

inline RunContext make_run_context(RunConfig cfg) {
  RunContext ctx;
  ctx.personas = agents::PersonaRegistry{};
  cfg.validate(ctx.personas);
  ctx.familiar_words = text::load_word_list(cfg.resolved_familiar_words());
  ctx.tokenizer.abbreviations = text::load_abbreviations(cfg.resolved_abbreviations());
  ctx.catalog = agents::PromptCatalog::load(cfg.resolved_prompt_dir());
  ctx.active_personas = ctx.personas.resolve(cfg.personas);
  if (!cfg.examples_file.empty()) {
    ctx.draft_options.examples_text = read_file(cfg.examples_file);
  }

  if (cfg.backend == "scripted") {
    auto scripted = std::make_shared<gateway::ScriptedBackend>();
    agents::mock::MockAgentOptions mock_options;
    mock_options.familiar_words = ctx.familiar_words;
    mock_options.tokenizer = ctx.tokenizer;
    mock_options.draft_sentences = cfg.mock_draft_sentences;
    agents::mock::install_mock_agents(*scripted, std::move(mock_options));
    ctx.backend = scripted;
  } else if (cfg.backend == "replay") {
    ctx.backend = std::make_shared<gateway::ReplayBackend>(cfg.cassette);
  } else {
    gateway::HttpConfig http;
    http.endpoint = cfg.endpoint;
    http.api_key_env = cfg.api_key_env;
    ctx.backend = std::make_shared<gateway::HttpBackend>(http);
  }
  if (cfg.record) {
    if (cfg.cassette.empty()) throw ConfigError("recording needs --cassette");
    if (cfg.backend == "replay") throw ConfigError("cannot record from a replay backend");
    ctx.backend = std::make_shared<gateway::RecordingBackend>(ctx.backend, cfg.cassette);
  }
  ctx.cfg = std::move(cfg);
  return ctx;
}

namespace detail {

inline MetricSnapshot snapshot_metrics(const std::string& summary, const std::string& reference,
                                       const RunContext& ctx) {
  MetricSnapshot metrics;
  text::TokenizedText tokenized = text::tokenize(summary, ctx.tokenizer);
  if (tokenized.sentence_count() > 0) {
    metrics.readability = text::readability_report(tokenized, ctx.familiar_words);
  }
  if (!reference.empty()) {
    metrics.rouge = text::rouge1(summary, reference);
  }
  return metrics;
}

inline void persist_artifact(const RoundArtifact& artifact, const RunContext& ctx) {
  std::filesystem::path path = std::filesystem::path(ctx.cfg.output_dir) /
                               artifact_file_name(artifact.doc_id, artifact.round_index);
  write_file(path, artifact_to_json(artifact).dump(2) + "\n");
}

/// Outcomes for llm editor mode: the plan's exclusions stand; a planned edit
/// counts as Applied when its replacement can be located in the model's
/// revised text. A deletion (empty replacement) cannot be located, so it is
/// conservatively reported as skipped.
inline std::vector<editor::EditOutcome> reconcile_llm_outcomes(const editor::EditPlan& plan,
                                                               const std::string& revised) {
  std::vector<editor::EditOutcome> outcomes(plan.proposals.size());
  for (std::size_t i = 0; i < plan.proposals.size(); ++i) {
    outcomes[i].proposal_index = i;
    outcomes[i].kind = plan.proposals[i].kind;
    outcomes[i].original = plan.proposals[i].original;
    outcomes[i].replacement = plan.proposals[i].replacement;
  }
  for (const auto& [index, status] : plan.skipped) {
    outcomes[index].status = status;
  }
  std::size_t search_from = 0;
  for (const auto& edit : plan.edits) {
    editor::EditOutcome& outcome = outcomes[edit.proposal_index];
    const auto& proposal = plan.proposals[edit.proposal_index];
    std::optional<strings::Span> span;
    if (!proposal.replacement.empty()) {
      span = strings::find_normalized(revised, proposal.replacement, search_from);
    }
    if (span) {
      outcome.status = editor::EditStatus::Applied;
      outcome.pre_span = edit.anchor;
      outcome.post_span = span;
      search_from = span->end;
    } else {
      outcome.status = editor::EditStatus::SkippedAnchorMissing;
    }
  }
  return outcomes;
}

}  // namespace detail

/// Executes the refinement loop for one document: classify, draft, then N
/// rounds of feedback, checklist aggregation, expert proposals, and editing.
/// Each round's artifact is persisted and appended to `artifacts` as soon as
/// the round completes, so an abort never loses finished rounds.
inline void run_document_into(const SourceDocument& doc, const RunContext& ctx,
                              std::vector<RoundArtifact>& artifacts,
                              Warnings* warnings = nullptr) {
  gateway::LlmGateway gw(ctx.backend);
  agents::AgentContext actx{gw, ctx.catalog, ctx.cfg.model};

  auto [genre, expert] = agents::classify_genre(doc.text, actx, 0, warnings);
  std::string summary =
      agents::draft_initial_summary(doc.text, genre, expert, actx, ctx.draft_options, 0, warnings);

  RoundArtifact initial;
  initial.doc_id = doc.id;
  initial.round_index = 0;
  initial.summary = summary;
  initial.metrics = detail::snapshot_metrics(summary, doc.reference, ctx);
  initial.ledger_slice = gw.ledger().slice_for_round(0);
  initial.prompt_catalog_hash = ctx.catalog.version_hash();
  detail::persist_artifact(initial, ctx);
  artifacts.push_back(std::move(initial));

  std::string prior_checklists;  // rendered only when the accumulation flag is on
  for (int round = 1; round <= ctx.cfg.rounds; ++round) {
    RoundArtifact artifact;
    artifact.doc_id = doc.id;
    artifact.round_index = round;

    for (const auto& persona : ctx.active_personas) {
      artifact.feedbacks.push_back(
          agents::collect_feedback(persona, summary, actx, round, warnings));
    }
    artifact.checklist = checklist::aggregate(artifact.feedbacks, summary, ctx.cfg.checklist_k,
                                              ctx.tokenizer, warnings);
    if (!artifact.checklist.empty()) {
      artifact.proposals =
          agents::propose_revisions(expert, summary, artifact.checklist, actx, round, doc.text,
                                    warnings, prior_checklists);
    }
    if (ctx.cfg.include_prior_checklists && !artifact.checklist.empty()) {
      prior_checklists += "Round " + std::to_string(round) + ":\n" +
                          checklist::checklist_prompt_json(artifact.checklist).dump(2) + "\n";
    }

    editor::EditPlan plan = editor::plan_edits(summary, artifact.proposals);
    std::string revised;
    if (ctx.cfg.editor_mode == "llm" && !artifact.checklist.empty()) {
      std::vector<agents::RevisionProposal> planned;
      for (const auto& edit : plan.edits) planned.push_back(plan.proposals[edit.proposal_index]);
      revised = agents::edit_via_llm(summary, planned, actx, round, warnings);
      artifact.outcomes = detail::reconcile_llm_outcomes(plan, revised);
    } else {
      auto [applied, outcomes] = editor::apply_edits(summary, plan);
      revised = std::move(applied);
      artifact.outcomes = std::move(outcomes);
    }

    artifact.summary = revised;
    artifact.metrics = detail::snapshot_metrics(revised, doc.reference, ctx);
    artifact.ledger_slice = gw.ledger().slice_for_round(round);
    artifact.prompt_catalog_hash = ctx.catalog.version_hash();
    detail::persist_artifact(artifact, ctx);
    artifacts.push_back(std::move(artifact));
    summary = revised;
  }
}

inline std::vector<RoundArtifact> run_document(const SourceDocument& doc, const RunContext& ctx,
                                               Warnings* warnings = nullptr) {
  std::vector<RoundArtifact> artifacts;
  run_document_into(doc, ctx, artifacts, warnings);
  return artifacts;
}

struct DocumentStatus {
  std::string doc_id;
  bool ok = false;
  std::string error;
  int rounds_completed = 0;  // rounds persisted, counting the initial summary
  std::size_t calls = 0;
  std::map<int, std::size_t> calls_per_round;
};

struct RunManifest {
  Json config_echo;
  std::vector<DocumentStatus> documents;
  std::size_t documents_ok = 0;
  std::size_t documents_failed = 0;
  std::size_t total_calls = 0;
  std::map<int, std::size_t> calls_per_round;
  std::string manifest_hash;

  Json to_json() const {
    Json docs = Json::array();
    for (const auto& status : documents) {
      Json rounds = Json::object();
      for (const auto& [round, calls] : status.calls_per_round) {
        rounds[std::to_string(round)] = calls;
      }
      docs.push_back(Json{{"doc_id", status.doc_id},
                          {"status", status.ok ? "ok" : "failed"},
                          {"error", status.error},
                          {"rounds_completed", status.rounds_completed},
                          {"calls", status.calls},
                          {"calls_per_round", std::move(rounds)}});
    }
    Json rounds = Json::object();
    for (const auto& [round, calls] : calls_per_round) {
      rounds[std::to_string(round)] = calls;
    }
    Json j{{"config", config_echo},
           {"documents", std::move(docs)},
           {"totals",
            {{"documents_ok", documents_ok},
             {"documents_failed", documents_failed},
             {"total_calls", total_calls},
             {"calls_per_round", std::move(rounds)}}}};
    if (!manifest_hash.empty()) j["manifest_hash"] = manifest_hash;
    return j;
  }
};

/// Runs documents independently (parallelizable up to cfg.workers); a failed
/// document never aborts the others. Writes per-document artifact files plus
/// run.json at the output root and returns the manifest.
inline RunManifest run_corpus(const std::vector<SourceDocument>& docs, const RunContext& ctx) {
  std::vector<DocumentStatus> statuses(docs.size());

  auto process = [&](std::size_t index) {
    const SourceDocument& doc = docs[index];
    DocumentStatus& status = statuses[index];
    status.doc_id = doc.id;
    std::vector<RoundArtifact> artifacts;
    try {
      run_document_into(doc, ctx, artifacts);
      status.ok = true;
    } catch (const std::exception& e) {
      status.ok = false;
      status.error = e.what();
    }
    // Completed rounds are persisted and counted even after an abort.
    status.rounds_completed = static_cast<int>(artifacts.size());
    for (const auto& artifact : artifacts) {
      status.calls += artifact.ledger_slice.size();
      status.calls_per_round[artifact.round_index] += artifact.ledger_slice.size();
    }
  };

  int workers = std::min<int>(ctx.cfg.workers, static_cast<int>(docs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < docs.size(); i = next.fetch_add(1)) {
          process(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  RunManifest manifest;
  manifest.config_echo = ctx.cfg.to_json();
  manifest.documents = std::move(statuses);
  for (const auto& status : manifest.documents) {
    if (status.ok) {
      ++manifest.documents_ok;
    } else {
      ++manifest.documents_failed;
    }
    manifest.total_calls += status.calls;
    for (const auto& [round, calls] : status.calls_per_round) {
      manifest.calls_per_round[round] += calls;
    }
  }
  manifest.manifest_hash = content_hash(manifest.to_json().dump());
  write_file(std::filesystem::path(ctx.cfg.output_dir) / "run.json",
             manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace nrlb::pipeline
