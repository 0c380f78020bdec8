#include <doctest.h>

#include <memory>
#include <set>
#include <string>

#include "nrlb/agents/agents.hpp"
#include "nrlb/agents/mock_agents.hpp"
#include "nrlb/text/word_list.hpp"

using namespace nrlb;
using agents::Genre;
using agents::ExpertRole;

namespace {

const agents::PromptCatalog& catalog() {
  static const agents::PromptCatalog c =
      agents::PromptCatalog::load(std::string(NRLB_SOURCE_DATA_DIR) + "/prompts");
  return c;
}

const text::WordSet& familiar_words() {
  static const text::WordSet words =
      text::load_word_list(std::string(NRLB_SOURCE_DATA_DIR) + "/dale_chall_familiar_words.txt");
  return words;
}

struct Harness {
  std::shared_ptr<gateway::ScriptedBackend> backend = std::make_shared<gateway::ScriptedBackend>();
  std::unique_ptr<gateway::LlmGateway> gw = std::make_unique<gateway::LlmGateway>(backend);
  agents::AgentContext ctx{*gw, catalog(), agents::ModelSettings{}};
};

Harness mock_harness() {
  Harness h;
  agents::mock::MockAgentOptions options;
  options.familiar_words = familiar_words();
  agents::mock::install_mock_agents(*h.backend, std::move(options));
  return h;
}

}  // namespace

TEST_CASE("genre: label parsing and fixed expert mapping") {
  CHECK(agents::parse_genre("Policy Report") == Genre::PolicyReport);
  CHECK(agents::parse_genre("policy_report") == Genre::PolicyReport);
  CHECK(agents::parse_genre("ACADEMIC PAPER") == Genre::AcademicPaper);
  CHECK_THROWS_AS(agents::parse_genre("novel"), UnknownLabelError);

  CHECK(agents::expert_for(Genre::AcademicPaper) == ExpertRole::Biomedical);
  CHECK(agents::expert_for(Genre::PolicyReport) == ExpertRole::Policy);
  CHECK(agents::expert_for(Genre::LegislativeBill) == ExpertRole::Legal);
  CHECK(agents::expert_for(Genre::PatentDocument) == ExpertRole::Patent);
}

TEST_CASE("genre: templates have at least three uniquely labeled slots") {
  for (Genre g : {Genre::AcademicPaper, Genre::PolicyReport, Genre::LegislativeBill,
                  Genre::PatentDocument}) {
    const auto& tmpl = agents::template_for(g);
    CHECK(tmpl.slots.size() >= 3);
    std::set<std::string> labels;
    for (const auto& slot : tmpl.slots) labels.insert(slot.label);
    CHECK(labels.size() == tmpl.slots.size());
  }
}

TEST_CASE("personas: registry has the three core personas plus extensions") {
  agents::PersonaRegistry registry;
  for (const auto& id : agents::PersonaRegistry::core_ids()) {
    CHECK(registry.has(id));
  }
  CHECK(registry.has("senior"));
  CHECK(registry.has("learning_difficulties"));
  CHECK(registry.get("ele").id == "elementary");  // ablation-table aliases resolve
  CHECK(registry.get("non").id == "non_native");
  CHECK(registry.get("att").id == "attention_deficit");
  CHECK_THROWS_AS(registry.get("toddler"), ConfigError);

  agents::ReaderPersona custom{"expert_reader", "Expert", "reader_elementary", "none"};
  registry.register_persona(custom);
  CHECK(registry.get("expert_reader").display_name == "Expert");
}

TEST_CASE("prompt catalog: rendering is pure and placeholders are strict") {
  auto a = catalog().render("planner", {{"document", "text body"}});
  auto b = catalog().render("planner", {{"document", "text body"}});
  CHECK(a == b);
  CHECK(a.find("text body") != std::string::npos);
  CHECK(a.find("{{") == std::string::npos);
  CHECK_FALSE(catalog().version_hash().empty());
  CHECK_THROWS_AS(catalog().render("planner", {}), ConfigError);       // missing var
  CHECK_THROWS_AS(catalog().render("nonexistent", {}), ConfigError);   // unknown binding
}

TEST_CASE("classify_genre: passthrough, mapping fallback, and errors") {
  Harness h;
  h.backend->enqueue_for("planner",
                         R"({"document_type":"Policy Report","expert":"Policy"})");
  auto [genre, expert] = agents::classify_genre("Some report text.", h.ctx);
  CHECK(genre == Genre::PolicyReport);
  CHECK(expert == ExpertRole::Policy);

  h.backend->enqueue_for("planner", R"({"document_type":"Patent Document"})");
  Warnings warnings;
  auto [genre2, expert2] = agents::classify_genre("Claims...", h.ctx, 0, &warnings);
  CHECK(genre2 == Genre::PatentDocument);
  CHECK(expert2 == ExpertRole::Patent);
  CHECK_FALSE(warnings.empty());

  // Unparseable first reply, valid after the single reprompt.
  h.backend->enqueue_for("planner", "I think this is a bill?");
  h.backend->enqueue_for("planner", R"({"document_type":"Legislative Bill"})");
  auto [genre3, expert3] = agents::classify_genre("A bill.", h.ctx);
  CHECK(genre3 == Genre::LegislativeBill);
  CHECK(expert3 == ExpertRole::Legal);

  // Two unparseable replies exhaust the reprompt budget.
  h.backend->enqueue_for("planner", "nope");
  h.backend->enqueue_for("planner", "still nope");
  CHECK_THROWS_AS(agents::classify_genre("text", h.ctx), SchemaViolationError);

  // A label outside the four types is an immediate error.
  h.backend->enqueue_for("planner", R"({"document_type":"Novel"})");
  CHECK_THROWS_AS(agents::classify_genre("text", h.ctx), UnknownLabelError);

  CHECK_THROWS_AS(agents::classify_genre("   ", h.ctx), Error);
}

TEST_CASE("draft_initial_summary: passthrough and empty-draft error") {
  Harness h;
  h.backend->enqueue_for("expert_draft", "This study shows a result. It matters.");
  auto draft = agents::draft_initial_summary("doc text", Genre::AcademicPaper,
                                             ExpertRole::Biomedical, h.ctx);
  CHECK(draft == "This study shows a result. It matters.");

  h.backend->enqueue_for("expert_draft", "   \n  ");
  CHECK_THROWS_AS(agents::draft_initial_summary("doc text", Genre::AcademicPaper,
                                                ExpertRole::Biomedical, h.ctx),
                  EmptyDraftError);
}

TEST_CASE("collect_feedback: anchoring, missing keys, schema violations") {
  Harness h;
  agents::PersonaRegistry registry;
  const auto& elementary = registry.get("elementary");

  std::string summary = "The bill changes tax expenditures for farms.";
  h.backend->enqueue_for(
      "reader_elementary",
      R"({"unknown_terms":[{"excerpt":"tax expenditures","comment":"I don't know this word"}],)"
      R"("missing_contexts":[],"confusing_sentences":[]})");
  auto feedback = agents::collect_feedback(elementary, summary, h.ctx, 1);
  REQUIRE(feedback.unknown_terms.size() == 1);
  CHECK(feedback.unknown_terms[0].anchored);
  CHECK(feedback.persona_id == "elementary");
  CHECK(feedback.missing_contexts.empty());

  // Excerpt not present in the summary -> anchored = false.
  h.backend->enqueue_for(
      "reader_elementary",
      R"({"unknown_terms":[{"excerpt":"tax expenditures","comment":"?"}],)"
      R"("missing_contexts":[],"confusing_sentences":[]})");
  auto unanchored = agents::collect_feedback(elementary, "Totally different text.", h.ctx, 1);
  REQUIRE(unanchored.unknown_terms.size() == 1);
  CHECK_FALSE(unanchored.unknown_terms[0].anchored);

  // Whitespace differences still anchor.
  h.backend->enqueue_for(
      "reader_elementary",
      R"({"unknown_terms":[{"excerpt":"tax  expenditures"}],"missing_contexts":[],)"
      R"("confusing_sentences":[]})");
  auto spaced = agents::collect_feedback(elementary, summary, h.ctx, 1);
  CHECK(spaced.unknown_terms[0].anchored);

  // Absent category defaults to empty with a warning.
  h.backend->enqueue_for("reader_elementary", R"({"unknown_terms":[]})");
  Warnings warnings;
  auto partial = agents::collect_feedback(elementary, summary, h.ctx, 1, &warnings);
  CHECK(partial.confusing_sentences.empty());
  CHECK(warnings.size() == 2);  // missing_contexts and confusing_sentences were absent

  // Malformed twice -> schema violation.
  h.backend->enqueue_for("reader_elementary", R"({"unknown_terms": "not a list"})");
  h.backend->enqueue_for("reader_elementary", R"([1, 2])");
  CHECK_THROWS_AS(agents::collect_feedback(elementary, summary, h.ctx, 1),
                  SchemaViolationError);

  // Wrong field types surface as schema violations, not raw JSON errors.
  for (int i = 0; i < 2; ++i) {
    h.backend->enqueue_for(
        "reader_elementary",
        R"({"unknown_terms":[{"excerpt":"x","comment":5}],"missing_contexts":[],)"
        R"("confusing_sentences":[]})");
  }
  CHECK_THROWS_AS(agents::collect_feedback(elementary, summary, h.ctx, 1),
                  SchemaViolationError);
}

TEST_CASE("propose_revisions: parsing, bounds, insufficient information") {
  Harness h;
  std::string summary = "Patients with hypertension received treatment.";
  std::vector<agents::ReaderFeedback> feedbacks(1);
  feedbacks[0].persona_id = "elementary";
  feedbacks[0].unknown_terms.push_back({"hypertension", "hard word", true});
  auto checklist = checklist::aggregate(feedbacks, summary, 3);

  h.backend->enqueue_for(
      "expert_revise",
      R"({"revisions":[{"kind":"ReplaceTerm","original":"hypertension",)"
      R"("replacement":"high blood pressure","rationale":"simpler"}]})");
  auto proposals = agents::propose_revisions(ExpertRole::Biomedical, summary, checklist,
                                             h.ctx, 1);
  REQUIRE(proposals.size() == 1);
  CHECK(proposals[0].kind == agents::RevisionKind::ReplaceTerm);
  CHECK(proposals[0].replacement == "high blood pressure");  // 3 words, within bound
  CHECK_FALSE(proposals[0].bound_truncated);

  // Over-length replacements are truncated at the word bound and flagged.
  h.backend->enqueue_for(
      "expert_revise",
      R"({"revisions":[{"kind":"add_context","original":"hypertension",)"
      R"("replacement":"one two three four five six seven eight nine ten eleven twelve )"
      R"(thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty"}]})");
  Warnings warnings;
  auto truncated = agents::propose_revisions(ExpertRole::Biomedical, summary, checklist, h.ctx,
                                             1, "", &warnings);
  REQUIRE(truncated.size() == 1);
  CHECK(truncated[0].bound_truncated);
  CHECK(strings::count_words(truncated[0].replacement) == 15);
  CHECK_FALSE(warnings.empty());

  h.backend->enqueue_for(
      "expert_revise",
      R"({"revisions":[{"kind":"replace_term","original":"x",)"
      R"("replacement":"a b c d e f g h"}]})");
  auto replace_bound = agents::propose_revisions(ExpertRole::Biomedical, summary, checklist,
                                                 h.ctx, 1);
  CHECK(strings::count_words(replace_bound[0].replacement) == 5);
  CHECK(replace_bound[0].bound_truncated);

  // insufficient_information forces an empty replacement.
  h.backend->enqueue_for(
      "expert_revise",
      R"({"revisions":[{"kind":"insufficient_information","original":"hypertension",)"
      R"("replacement":"should be dropped"}]})");
  auto insufficient = agents::propose_revisions(ExpertRole::Biomedical, summary, checklist,
                                                h.ctx, 1);
  CHECK(insufficient[0].replacement.empty());

  // Zero proposals is a valid result with a warning.
  h.backend->enqueue_for("expert_revise", R"({"revisions":[]})");
  Warnings zero_warnings;
  auto zero = agents::propose_revisions(ExpertRole::Biomedical, summary, checklist, h.ctx, 1,
                                        "", &zero_warnings);
  CHECK(zero.empty());
  CHECK_FALSE(zero_warnings.empty());

  CHECK_THROWS_AS(agents::propose_revisions(ExpertRole::Biomedical, summary,
                                            checklist::Checklist{}, h.ctx, 1),
                  Error);  // empty checklist precondition
}

TEST_CASE("mock planner: keyword routing") {
  Harness h = mock_harness();
  auto [patent_genre, patent_expert] = agents::classify_genre(
      "The invention relates to an embodiment of the claim in this patent.", h.ctx);
  CHECK(patent_genre == Genre::PatentDocument);
  CHECK(patent_expert == ExpertRole::Patent);

  auto [policy_genre, policy_expert] = agents::classify_genre(
      "GAO reviewed the federal agency and the report recommends new policy controls.", h.ctx);
  CHECK(policy_genre == Genre::PolicyReport);
  CHECK(policy_expert == ExpertRole::Policy);
}

TEST_CASE("mock readers: literal flagging rules") {
  Harness h = mock_harness();
  agents::PersonaRegistry registry;

  // One 20-word sentence -> flagged as confusing by the elementary reader.
  std::string twenty =
      "The committee formed last year reviewed every single document very carefully "
      "before it issued the final public statement today again.";
  REQUIRE(text::tokenize(twenty).sentences[0].word_count == 20);
  auto elementary = agents::collect_feedback(registry.get("elementary"), twenty, h.ctx, 1);
  REQUIRE(elementary.confusing_sentences.size() == 1);
  CHECK(elementary.confusing_sentences[0].anchored);

  // Out-of-list vocabulary -> unknown term for the elementary reader.
  std::string jargon = "The mitochondrial assay failed.";
  auto unknown = agents::collect_feedback(registry.get("elementary"), jargon, h.ctx, 1);
  bool flagged_mito = false;
  for (const auto& item : unknown.unknown_terms) {
    if (item.excerpt == "mitochondrial") flagged_mito = true;
  }
  CHECK(flagged_mito);

  // Acronyms -> missing context.
  auto acronym = agents::collect_feedback(registry.get("elementary"),
                                          "The GAO issued findings.", h.ctx, 1);
  REQUIRE(acronym.missing_contexts.size() == 1);
  CHECK(acronym.missing_contexts[0].excerpt == "GAO");

  // Short, familiar sentence -> no flags from the elementary reader.
  auto clean = agents::collect_feedback(registry.get("elementary"),
                                        "The cat sat on the mat.", h.ctx, 1);
  CHECK(clean.unknown_terms.empty());
  CHECK(clean.confusing_sentences.empty());

  // Repeated passive voice -> non-native reader flags the sentence.
  std::string passive = "The report was written and the budget was approved.";
  auto nonnative = agents::collect_feedback(registry.get("non_native"), passive, h.ctx, 1);
  CHECK(nonnative.confusing_sentences.size() == 1);
}

TEST_CASE("mock expert: sentence splitting and insufficient information") {
  Harness h = mock_harness();
  agents::PersonaRegistry registry;

  std::string summary =
      "The spectral fingerprinting apparatus that the laboratory assembled over two years "
      "detects counterfeit packaging through layered optical comparison of samples. "
      "The NIH registry was consulted.";
  std::vector<agents::ReaderFeedback> feedbacks;
  for (const auto& id : agents::PersonaRegistry::core_ids()) {
    feedbacks.push_back(agents::collect_feedback(registry.get(id), summary, h.ctx, 1));
  }
  auto checklist = checklist::aggregate(feedbacks, summary, 3);
  REQUIRE_FALSE(checklist.empty());
  REQUIRE_FALSE(checklist.missing_contexts.empty());  // the NIH acronym

  // The source never mentions NIH, so that context has no support.
  std::string source = "A scanner was tested with a registry of packaging samples.";
  auto proposals =
      agents::propose_revisions(ExpertRole::Patent, summary, checklist, h.ctx, 1, source);
  REQUIRE_FALSE(proposals.empty());

  bool has_rewrite = false;
  bool has_insufficient = false;
  for (const auto& proposal : proposals) {
    if (proposal.kind == agents::RevisionKind::RewriteSentence) {
      has_rewrite = true;
      auto original_words = strings::count_words(proposal.original);
      for (const auto& sentence : text::tokenize(proposal.replacement).sentences) {
        CHECK(sentence.word_count < original_words);
      }
    }
    if (proposal.kind == agents::RevisionKind::InsufficientInformation) {
      has_insufficient = true;
      CHECK(proposal.replacement.empty());
    }
  }
  CHECK(has_rewrite);
  CHECK(has_insufficient);
}

TEST_CASE("mock editor: applies planned revisions through the editor prompt") {
  Harness h = mock_harness();
  std::string summary = "We utilize the device. It works.";
  std::vector<agents::RevisionProposal> planned;
  planned.push_back({agents::RevisionKind::ReplaceTerm, "utilize", "use", "", "", false});
  auto revised = agents::edit_via_llm(summary, planned, h.ctx, 1);
  CHECK(revised == "We use the device. It works.");
}
