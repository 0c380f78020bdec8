#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nrlb/pipeline/runner.hpp"
#include "support/synthetic.hpp"

using namespace nrlb;
using pipeline::RoundArtifact;
using pipeline::RunConfig;
using pipeline::SourceDocument;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "nrlb_pipeline_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

RunConfig base_config(const std::string& out_name) {
  RunConfig cfg;
  cfg.backend = "scripted";
  cfg.data_dir = NRLB_SOURCE_DATA_DIR;
  cfg.output_dir = fresh_dir(out_name).string();
  return cfg;
}

std::map<int, std::size_t> calls_by_round(const std::vector<RoundArtifact>& artifacts) {
  std::map<int, std::size_t> calls;
  for (const auto& artifact : artifacts) {
    calls[artifact.round_index] = artifact.ledger_slice.size();
  }
  return calls;
}

}  // namespace

TEST_CASE("run_document: N = 0 produces exactly the initial artifact") {
  RunConfig cfg = base_config("n0");
  cfg.rounds = 0;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(1, 1);

  auto artifacts = pipeline::run_document(docs[0], ctx);
  REQUIRE(artifacts.size() == 1);
  CHECK(artifacts[0].round_index == 0);
  CHECK(artifacts[0].feedbacks.empty());
  CHECK(artifacts[0].checklist.empty());
  CHECK(artifacts[0].proposals.empty());
  CHECK(artifacts[0].outcomes.empty());
  CHECK(artifacts[0].ledger_slice.size() == 2);  // planner + draft, no reader calls
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "syn0.initial.json"));
}

TEST_CASE("run_document: N = 2 with mocks gives 3 artifacts and 2 + 4N calls") {
  RunConfig cfg = base_config("n2");
  cfg.rounds = 2;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(1, 2);

  auto artifacts = pipeline::run_document(docs[0], ctx);
  REQUIRE(artifacts.size() == 3);
  auto calls = calls_by_round(artifacts);
  CHECK(calls[0] == 2);  // planner + expert draft
  CHECK(calls[1] == 4);  // 3 readers + 1 expert (deterministic editor: no call)
  CHECK(calls[2] == 4);
  CHECK(artifacts[1].summary != artifacts[0].summary);

  // Metric snapshots and catalog hash are recorded per round.
  for (const auto& artifact : artifacts) {
    CHECK(artifact.metrics.readability.sentence_count > 0);
    CHECK(artifact.metrics.rouge.has_value());
    CHECK_FALSE(artifact.prompt_catalog_hash.empty());
  }
}

TEST_CASE("run_document: llm editor mode adds one call per round") {
  RunConfig cfg = base_config("llm_editor");
  cfg.rounds = 2;
  cfg.editor_mode = "llm";
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(1, 3);

  auto artifacts = pipeline::run_document(docs[0], ctx);
  auto calls = calls_by_round(artifacts);
  CHECK(calls[0] == 2);
  CHECK(calls[1] == 5);  // readers + expert + editor
  CHECK(calls[2] == 5);

  // The scripted editor applies the plan deterministically, so outcomes of
  // planned edits are Applied with spans in the revised text.
  for (const auto& outcome : artifacts[1].outcomes) {
    if (outcome.status == editor::EditStatus::Applied) {
      REQUIRE(outcome.post_span.has_value());
      CHECK(artifacts[1].summary.substr(outcome.post_span->begin,
                                        outcome.post_span->length()) == outcome.replacement);
    }
  }
}

TEST_CASE("run_document: round chaining reproduces each summary from the last") {
  RunConfig cfg = base_config("chain");
  cfg.rounds = 2;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(2, 7);

  for (const auto& doc : docs) {
    auto artifacts = pipeline::run_document(doc, ctx);
    for (std::size_t r = 1; r < artifacts.size(); ++r) {
      auto plan = editor::plan_edits(artifacts[r - 1].summary, artifacts[r].proposals);
      auto [reapplied, outcomes] = editor::apply_edits(artifacts[r - 1].summary, plan);
      CHECK(reapplied == artifacts[r].summary);
      CHECK(outcomes == artifacts[r].outcomes);
    }
  }
}

TEST_CASE("artifacts: persisted files parse back into equal values") {
  RunConfig cfg = base_config("roundtrip");
  cfg.rounds = 1;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(1, 11);

  auto artifacts = pipeline::run_document(docs[0], ctx);
  for (const auto& artifact : artifacts) {
    auto path = std::filesystem::path(cfg.output_dir) /
                pipeline::artifact_file_name(artifact.doc_id, artifact.round_index);
    REQUIRE(std::filesystem::exists(path));
    auto parsed = pipeline::artifact_from_json(nlohmann::json::parse(read_file(path)));
    CHECK(parsed == artifact);
  }
}

TEST_CASE("run_corpus: per-document failures are isolated in the manifest") {
  RunConfig cfg = base_config("isolation");
  cfg.rounds = 1;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(3, 13);
  docs[1].text = "   ";  // classification of an empty document fails

  auto manifest = pipeline::run_corpus(docs, ctx);
  CHECK(manifest.documents_ok == 2);
  CHECK(manifest.documents_failed == 1);
  REQUIRE(manifest.documents.size() == 3);
  CHECK(manifest.documents[1].ok == false);
  CHECK_FALSE(manifest.documents[1].error.empty());
  CHECK(manifest.documents[0].ok);
  CHECK(manifest.documents[2].ok);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "run.json"));

  // Ledger conservation: totals equal the sum of per-round counts.
  std::size_t per_round_sum = 0;
  for (const auto& [round, calls] : manifest.calls_per_round) per_round_sum += calls;
  CHECK(per_round_sum == manifest.total_calls);
}

TEST_CASE("run_corpus: 500-document mock run keeps manifest totals consistent") {
  RunConfig cfg = base_config("corpus500");
  cfg.rounds = 1;
  auto ctx = pipeline::make_run_context(cfg);
  auto docs = nrlb_test::make_synthetic_corpus(500, 31);

  auto manifest = pipeline::run_corpus(docs, ctx);
  CHECK(manifest.documents_ok == 500);
  CHECK(manifest.documents_failed == 0);

  // Conservation: the manifest totals equal the tallies recomputed from the
  // persisted artifact ledger slices.
  std::size_t recomputed_total = 0;
  std::map<int, std::size_t> recomputed_rounds;
  for (const auto& doc : docs) {
    for (int round = 0; round <= 1; ++round) {
      auto artifact = pipeline::artifact_from_json(nlohmann::json::parse(read_file(
          std::filesystem::path(cfg.output_dir) / pipeline::artifact_file_name(doc.id, round))));
      recomputed_total += artifact.ledger_slice.size();
      recomputed_rounds[round] += artifact.ledger_slice.size();
    }
  }
  CHECK(manifest.total_calls == recomputed_total);
  CHECK(manifest.calls_per_round == recomputed_rounds);
  CHECK(manifest.total_calls == 500 * (2 + 4));  // 2 initial + 4 per round
}

TEST_CASE("run_corpus: worker pool matches sequential output") {
  auto docs = nrlb_test::make_synthetic_corpus(6, 17);

  RunConfig sequential = base_config("workers_seq");
  sequential.rounds = 1;
  auto ctx_seq = pipeline::make_run_context(sequential);
  auto manifest_seq = pipeline::run_corpus(docs, ctx_seq);

  RunConfig parallel = base_config("workers_par");
  parallel.rounds = 1;
  parallel.workers = 4;
  auto ctx_par = pipeline::make_run_context(parallel);
  auto manifest_par = pipeline::run_corpus(docs, ctx_par);

  CHECK(manifest_seq.documents_ok == manifest_par.documents_ok);
  CHECK(manifest_seq.total_calls == manifest_par.total_calls);
  for (const auto& doc : docs) {
    for (int round = 0; round <= 1; ++round) {
      auto name = pipeline::artifact_file_name(doc.id, round);
      auto seq_file = read_file(std::filesystem::path(sequential.output_dir) / name);
      auto par_file = read_file(std::filesystem::path(parallel.output_dir) / name);
      CHECK(seq_file == par_file);
    }
  }
}

TEST_CASE("replay: recorded cassette reproduces byte-identical artifacts") {
  auto docs = nrlb_test::make_synthetic_corpus(2, 19);
  auto cassette = fresh_dir("cassette") / "run.jsonl";

  RunConfig record_cfg = base_config("record_run");
  record_cfg.rounds = 2;
  record_cfg.record = true;
  record_cfg.cassette = cassette.string();
  auto record_ctx = pipeline::make_run_context(record_cfg);
  auto record_manifest = pipeline::run_corpus(docs, record_ctx);
  REQUIRE(record_manifest.documents_failed == 0);

  auto replay_once = [&](const std::string& name) {
    RunConfig cfg = base_config(name);
    cfg.rounds = 2;
    cfg.backend = "replay";
    cfg.cassette = cassette.string();
    auto ctx = pipeline::make_run_context(cfg);
    return std::make_pair(cfg.output_dir, pipeline::run_corpus(docs, ctx));
  };
  auto [dir_a, manifest_a] = replay_once("replay_a");
  auto [dir_b, manifest_b] = replay_once("replay_b");

  CHECK(manifest_a.documents_failed == 0);
  for (const auto& doc : docs) {
    for (int round = 0; round <= 2; ++round) {
      auto name = pipeline::artifact_file_name(doc.id, round);
      CHECK(read_file(std::filesystem::path(dir_a) / name) ==
            read_file(std::filesystem::path(dir_b) / name));
    }
  }
  // Manifest hashes agree once the differing output_dir config echo is the
  // only difference... so compare the per-run hashes of a itself re-run.
  CHECK(manifest_a.total_calls == manifest_b.total_calls);
}

TEST_CASE("run_corpus: an abort mid-round keeps every completed round on disk") {
  RunConfig cfg = base_config("abort");
  cfg.rounds = 2;
  cfg.personas = {"elementary"};
  auto ctx = pipeline::make_run_context(cfg);

  // Scripted replies cover the initial phase and round 1 only; the round-2
  // reader call finds no reply and aborts the document.
  auto scripted = std::make_shared<gateway::ScriptedBackend>();
  scripted->enqueue_for("planner", R"({"document_type":"Academic Paper"})");
  scripted->enqueue_for("expert_draft",
                        "Patients with chronic hypertension received treatment. Results were "
                        "stable.");
  scripted->enqueue_for(
      "reader_elementary",
      R"({"unknown_terms":[{"excerpt":"hypertension","comment":"hard"}],)"
      R"("missing_contexts":[],"confusing_sentences":[]})");
  scripted->enqueue_for("expert_revise",
                        R"({"revisions":[{"kind":"replace_term","original":"hypertension",)"
                        R"("replacement":"high blood pressure"}]})");
  ctx.backend = scripted;

  pipeline::SourceDocument doc{"abort_doc", "Study text about treatment results.", "", "unit"};
  auto manifest = pipeline::run_corpus({doc}, ctx);
  REQUIRE(manifest.documents_failed == 1);
  CHECK(manifest.documents[0].rounds_completed == 2);  // initial + round 1 persisted
  CHECK(manifest.documents[0].calls == 2 + 2);         // planner/draft + reader/expert

  auto out = std::filesystem::path(cfg.output_dir);
  REQUIRE(std::filesystem::exists(out / "abort_doc.initial.json"));
  REQUIRE(std::filesystem::exists(out / "abort_doc.round1.json"));
  CHECK_FALSE(std::filesystem::exists(out / "abort_doc.round2.json"));

  // Persisted artifacts parse back cleanly and chain correctly.
  auto round1 = pipeline::artifact_from_json(
      nlohmann::json::parse(read_file(out / "abort_doc.round1.json")));
  CHECK(round1.summary.find("high blood pressure") != std::string::npos);
}

TEST_CASE("run_document: prior-round checklists reach the expert only when enabled") {
  auto capture = std::make_shared<std::vector<std::string>>();
  auto make_backend = [&] {
    auto scripted = std::make_shared<gateway::ScriptedBackend>();
    scripted->enqueue_for("planner", R"({"document_type":"Academic Paper"})");
    scripted->enqueue_for("expert_draft", "Patients with hypertension improved.");
    for (int round = 0; round < 2; ++round) {
      scripted->enqueue_for(
          "reader_elementary",
          R"({"unknown_terms":[{"excerpt":"hypertension","comment":"hard"}],)"
          R"("missing_contexts":[],"confusing_sentences":[]})");
    }
    scripted->set_handler("expert_revise",
                          [capture](const gateway::ChatRequest& request,
                                    const gateway::CallTag&) {
                            capture->push_back(request.messages.front().content);
                            return std::string(R"({"revisions":[]})");
                          });
    return scripted;
  };

  RunConfig cfg = base_config("prior_on");
  cfg.rounds = 2;
  cfg.personas = {"elementary"};
  cfg.include_prior_checklists = true;
  auto ctx = pipeline::make_run_context(cfg);
  ctx.backend = make_backend();
  pipeline::SourceDocument doc{"prior_doc", "Study of hypertension outcomes.", "", "unit"};
  pipeline::run_document(doc, ctx);
  REQUIRE(capture->size() == 2);
  CHECK((*capture)[0].find("(none)") != std::string::npos);
  CHECK((*capture)[1].find("Round 1:") != std::string::npos);

  capture->clear();
  RunConfig off_cfg = base_config("prior_off");
  off_cfg.rounds = 2;
  off_cfg.personas = {"elementary"};
  auto off_ctx = pipeline::make_run_context(off_cfg);
  off_ctx.backend = make_backend();
  pipeline::run_document(doc, off_ctx);
  REQUIRE(capture->size() == 2);
  CHECK((*capture)[1].find("Round 1:") == std::string::npos);  // off by default
}

TEST_CASE("config: validation catches bad values") {
  agents::PersonaRegistry registry;
  RunConfig cfg;
  cfg.rounds = 9;  // above the cap
  CHECK_THROWS_AS(cfg.validate(registry), ConfigError);
  cfg.rounds = 2;
  cfg.personas = {"nobody"};
  CHECK_THROWS_AS(cfg.validate(registry), ConfigError);
  cfg.personas = {"ele", "non"};
  cfg.backend = "replay";  // needs a cassette
  CHECK_THROWS_AS(cfg.validate(registry), ConfigError);
  cfg.backend = "scripted";
  cfg.editor_mode = "magic";
  CHECK_THROWS_AS(cfg.validate(registry), ConfigError);
  cfg.editor_mode = "llm";
  CHECK_NOTHROW(cfg.validate(registry));
}
