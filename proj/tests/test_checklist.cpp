#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nrlb/checklist/checklist.hpp"
#include "support/checklist_oracle.hpp"

using namespace nrlb;
using checklist::Checklist;
using checklist::Issue;
using checklist::IssueCategory;
using nrlb_test::make_checklist_case;
using RandomCase = nrlb_test::ChecklistCase;

namespace {

const std::string& kSummary = nrlb_test::checklist_case_summary();
const std::vector<std::string>& kPersonas = nrlb_test::checklist_case_personas();

RandomCase make_case(std::mt19937& rng) { return make_checklist_case(rng); }

std::vector<std::string> keys_of(const std::vector<Issue>& issues) {
  std::vector<std::string> keys;
  for (const auto& issue : issues) keys.push_back(issue.normalized_key);
  return keys;
}

}  // namespace

TEST_CASE("aggregate: agreement count dominates") {
  // One excerpt flagged by all three personas, another by one persona.
  std::vector<agents::ReaderFeedback> feedbacks(3);
  std::string summary = "Dogs run fast. The appropriations equilibria went up.";
  for (std::size_t i = 0; i < 3; ++i) {
    feedbacks[i].persona_id = kPersonas[i];
    feedbacks[i].unknown_terms.push_back({"appropriations", "", true});
  }
  feedbacks[0].unknown_terms.push_back({"equilibria", "", true});

  auto checklist = checklist::aggregate(feedbacks, summary, 3);
  REQUIRE(checklist.unknown_terms.size() == 2);
  CHECK(checklist.unknown_terms[0].excerpt == "appropriations");
  CHECK(checklist.unknown_terms[0].flag_count() == 3);
  CHECK(checklist.unknown_terms[1].flag_count() == 1);
}

TEST_CASE("aggregate: empty feedback yields empty checklist") {
  auto checklist = checklist::aggregate({}, "Some text.", 3);
  CHECK(checklist.empty());
  CHECK(checklist.total_issues() == 0);
}

TEST_CASE("aggregate: ARI of the enclosing sentence breaks flag-count ties") {
  // Two issues with equal flag counts; their enclosing sentences differ
  // sharply in ARI, so the harder sentence's issue ranks first.
  std::string summary =
      "Dogs run fast. "
      "The independent commission scrutinized intergovernmental appropriations meticulously.";
  auto sentences = text::tokenize(summary).sentences;
  REQUIRE(sentences.size() == 2);
  double easy_ari = text::ari_of(sentences[0].text);
  double hard_ari = text::ari_of(sentences[1].text);
  REQUIRE(hard_ari > easy_ari);

  std::vector<agents::ReaderFeedback> feedbacks(2);
  feedbacks[0].persona_id = "elementary";
  feedbacks[1].persona_id = "non_native";
  for (auto& feedback : feedbacks) {
    feedback.unknown_terms.push_back({"fast", "", true});           // easy sentence
    feedback.unknown_terms.push_back({"appropriations", "", true});  // hard sentence
  }
  auto checklist = checklist::aggregate(feedbacks, summary, 3);
  REQUIRE(checklist.unknown_terms.size() == 2);
  CHECK(checklist.unknown_terms[0].excerpt == "appropriations");
  CHECK(checklist.unknown_terms[0].ari_difficulty == doctest::Approx(hard_ari));
  CHECK(checklist.unknown_terms[1].excerpt == "fast");
}

TEST_CASE("aggregate: unanchored items are dropped with a warning") {
  std::vector<agents::ReaderFeedback> feedbacks(1);
  feedbacks[0].persona_id = "elementary";
  feedbacks[0].unknown_terms.push_back({"hallucinated phrase", "", false});
  feedbacks[0].unknown_terms.push_back({"present", "", true});
  Warnings warnings;
  auto checklist =
      checklist::aggregate(feedbacks, "The word present is here.", 3, {}, &warnings);
  CHECK(checklist.unknown_terms.size() == 1);
  CHECK(checklist.unknown_terms[0].excerpt == "present");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("unanchored") != std::string::npos);
}

TEST_CASE("aggregate: same persona flagging twice counts once") {
  std::vector<agents::ReaderFeedback> feedbacks(1);
  feedbacks[0].persona_id = "elementary";
  feedbacks[0].unknown_terms.push_back({"Appropriations", "", true});
  feedbacks[0].unknown_terms.push_back({"appropriations", "", true});  // case variant
  std::string summary = "The appropriations rose. Appropriations fell.";
  auto checklist = checklist::aggregate(feedbacks, summary, 3);
  REQUIRE(checklist.unknown_terms.size() == 1);
  CHECK(checklist.unknown_terms[0].flag_count() == 1);
}

TEST_CASE("enclosing_sentence: containment, absence, boundary spanning") {
  std::string summary = "A. B contains term X. C.";
  auto enclosing = checklist::enclosing_sentence(summary, "term X");
  REQUIRE(enclosing.has_value());
  CHECK(*enclosing == "B contains term X.");

  CHECK_FALSE(checklist::enclosing_sentence(summary, "absent phrase").has_value());

  // An excerpt spanning a sentence boundary has no single enclosing sentence.
  CHECK_FALSE(checklist::enclosing_sentence(summary, "X. C").has_value());

  // Whitespace-normalized containment.
  CHECK(checklist::enclosing_sentence(summary, "term  X").has_value());
}

TEST_CASE("aggregate: K truncation never keeps a worse issue over a better one") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    RandomCase c = make_case(rng);
    auto full = checklist::aggregate(c.feedbacks, kSummary, 10);
    auto cut = checklist::aggregate(c.feedbacks, kSummary, 2);
    for (int category = 0; category < 3; ++category) {
      auto cat = static_cast<IssueCategory>(category);
      const auto& full_issues = full.category(cat);
      const auto& cut_issues = cut.category(cat);
      CHECK(cut_issues.size() <= 2);
      // The cut list is exactly the head of the full ranking.
      for (std::size_t i = 0; i < cut_issues.size(); ++i) {
        CHECK(cut_issues[i].normalized_key == full_issues[i].normalized_key);
      }
    }
  }
}

TEST_CASE("aggregate: order matches the brute-force oracle (randomized)") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    RandomCase c = make_case(rng);
    auto checklist = checklist::aggregate(c.feedbacks, kSummary, 6);
    for (int category = 0; category < 3; ++category) {
      auto expected = nrlb_test::oracle_expected(c, category);
      if (expected.size() > 6) expected.resize(6);
      auto actual = keys_of(checklist.category(static_cast<IssueCategory>(category)));
      REQUIRE(actual.size() == expected.size());
      for (std::size_t i = 0; i < actual.size(); ++i) {
        CHECK(actual[i] == expected[i].key);
      }
    }
  }
}

TEST_CASE("aggregate: permutation invariance over feedback order") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    RandomCase c = make_case(rng);
    auto baseline = checklist::aggregate(c.feedbacks, kSummary, 3);
    auto shuffled = c.feedbacks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto permuted = checklist::aggregate(shuffled, kSummary, 3);
    CHECK(baseline == permuted);
  }
}

TEST_CASE("aggregate: adding a flagger never lowers an issue's rank") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    RandomCase c = make_case(rng);
    auto before = checklist::aggregate(c.feedbacks, kSummary, 10);
    // Pick an unknown-term issue not yet flagged by persona 0 and add it.
    const auto& issues = before.unknown_terms;
    std::size_t target = issues.size();
    for (std::size_t i = 0; i < issues.size(); ++i) {
      if (issues[i].flaggers.count(kPersonas[0]) == 0) {
        target = i;
        break;
      }
    }
    if (target == issues.size()) continue;
    std::string excerpt = issues[target].excerpt;
    std::string key = issues[target].normalized_key;

    auto boosted_feedbacks = c.feedbacks;
    boosted_feedbacks[0].unknown_terms.push_back({excerpt, "", true});
    auto after = checklist::aggregate(boosted_feedbacks, kSummary, 10);

    auto rank = [&](const Checklist& list) {
      const auto& items = list.unknown_terms;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].normalized_key == key) return i;
      }
      return items.size();
    };
    CHECK(rank(after) <= rank(before));
  }
}

TEST_CASE("checklist: issues flagged by every persona outrank all others") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    RandomCase c = make_case(rng);
    auto checklist = checklist::aggregate(c.feedbacks, kSummary, 10);
    for (int category = 0; category < 3; ++category) {
      const auto& issues = checklist.category(static_cast<IssueCategory>(category));
      bool seen_partial = false;
      for (const auto& issue : issues) {
        if (issue.flag_count() < kPersonas.size()) {
          seen_partial = true;
        } else {
          CHECK_FALSE(seen_partial);  // a full-agreement issue after a partial one
        }
      }
    }
  }
}

TEST_CASE("checklist: serialization round-trip") {
  std::vector<agents::ReaderFeedback> feedbacks(2);
  feedbacks[0].persona_id = "elementary";
  feedbacks[1].persona_id = "non_native";
  for (auto& feedback : feedbacks) {
    feedback.unknown_terms.push_back({"appropriations", "", true});
    feedback.confusing_sentences.push_back({"Dogs run fast.", "", true});
  }
  auto checklist = checklist::aggregate(feedbacks, kSummary, 3);
  auto round_trip = checklist::checklist_from_json(checklist::checklist_to_json(checklist));
  CHECK(round_trip == checklist);
}
