#pragma once

#include <set>
#include <string>
#include <vector>

#include "nrlb/agents/agents.hpp"
#include "nrlb/agents/genre.hpp"
#include "nrlb/editor/editor.hpp"
#include "nrlb/gateway/backend.hpp"
#include "nrlb/text/tokenizer.hpp"
#include "nrlb/text/word_list.hpp"

namespace nrlb::agents::mock {

/// Deterministic offline stand-ins for the live agents. The reader handlers
/// implement the personas' literal numeric flagging rules (the >15-word
/// sentence bound, out-of-list vocabulary with the familiar-word list as the
/// elementary vocabulary proxy, conjunction/relative-pronoun counting as the
/// clause-complexity proxy); the expert handler splits flagged sentences and
/// substitutes flagged terms; the editor handler applies revisions with the
/// deterministic applier.
struct MockAgentOptions {
  text::WordSet familiar_words;
  text::TokenizerOptions tokenizer;
  int draft_sentences = 8;
};

namespace detail {

inline std::string extract_block(const std::string& prompt, const std::string& open,
                                 const std::string& close) {
  std::size_t begin = prompt.find(open);
  if (begin == std::string::npos) {
    throw Error("mock agent cannot find prompt block " + open);
  }
  begin += open.size();
  std::size_t end = prompt.find(close, begin);
  if (end == std::string::npos) {
    throw Error("mock agent cannot find prompt block terminator " + close);
  }
  return std::string(strings::trim(std::string_view(prompt).substr(begin, end - begin)));
}

inline std::string prompt_text(const gateway::ChatRequest& request) {
  std::string all;
  for (const auto& m : request.messages) {
    all += m.content;
    all.push_back('\n');
  }
  return all;
}

inline bool all_alpha(const std::string& token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (!strings::is_alpha(c)) return false;
  }
  return true;
}

inline bool is_acronym(const std::string& token) {
  if (token.size() < 2 || token.size() > 6) return false;
  for (char c : token) {
    if (!strings::is_alpha(c) || strings::to_lower(c) == c) return false;
  }
  return true;
}

inline bool out_of_list(const std::string& token, const text::WordSet& familiar) {
  return familiar.count(strings::lower(token)) == 0;
}

inline std::size_t count_in(const std::vector<std::string>& tokens,
                            const std::set<std::string>& needles) {
  std::size_t n = 0;
  for (const auto& token : tokens) {
    if (needles.count(strings::lower(token)) > 0) ++n;
  }
  return n;
}

inline const std::set<std::string>& subordinate_markers() {
  static const std::set<std::string> markers = {
      "because", "although", "though", "whereas", "unless", "since",  "while",
      "if",      "that",     "which",  "who",     "whom",   "whose",  "when",
      "where",   "until",    "after",  "before"};
  return markers;
}

inline const std::set<std::string>& relative_pronouns() {
  static const std::set<std::string> pronouns = {"which", "that", "who", "whom", "whose"};
  return pronouns;
}

inline std::size_t passive_count(const std::vector<std::string>& tokens) {
  static const std::set<std::string> auxiliaries = {"is",    "are",  "was", "were",
                                                    "be",    "been", "being"};
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (auxiliaries.count(strings::lower(tokens[i])) == 0) continue;
    std::string next = strings::lower(tokens[i + 1]);
    if (next.size() >= 4) {
      std::string tail = next.substr(next.size() - 2);
      if (tail == "ed" || tail == "en") ++n;
    }
  }
  return n;
}

inline Json feedback_json(const std::vector<std::pair<std::string, std::string>>& unknown,
                          const std::vector<std::pair<std::string, std::string>>& missing,
                          const std::vector<std::pair<std::string, std::string>>& confusing) {
  auto items = [](const std::vector<std::pair<std::string, std::string>>& list) {
    Json arr = Json::array();
    for (const auto& [excerpt, comment] : list) {
      arr.push_back(Json{{"excerpt", excerpt}, {"comment", comment}});
    }
    return arr;
  };
  return Json{{"unknown_terms", items(unknown)},
              {"missing_contexts", items(missing)},
              {"confusing_sentences", items(confusing)}};
}

using Flags = std::vector<std::pair<std::string, std::string>>;

inline void flag_once(Flags& flags, std::set<std::string>& seen, const std::string& excerpt,
                      const std::string& comment) {
  if (seen.insert(strings::normalized_key(excerpt)).second) {
    flags.emplace_back(excerpt, comment);
  }
}

inline std::string reader_reply(const std::string& persona_id, const std::string& summary,
                                const MockAgentOptions& options) {
  text::TokenizedText tokenized = text::tokenize(summary, options.tokenizer);
  Flags unknown, missing, confusing;
  std::set<std::string> seen_unknown, seen_missing, seen_confusing;

  for (const auto& sentence : tokenized.sentences) {
    bool long_sentence = sentence.word_count > 15;
    std::size_t subordinate = count_in(sentence.tokens, subordinate_markers());
    std::size_t relatives = count_in(sentence.tokens, relative_pronouns());
    std::size_t passives = passive_count(sentence.tokens);

    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const std::string& token = sentence.tokens[i];
      if (persona_id == "elementary") {
        if (all_alpha(token) && token.size() >= 3 && !is_acronym(token) &&
            out_of_list(token, options.familiar_words)) {
          flag_once(unknown, seen_unknown, token, "too many difficult words");
        }
        if (is_acronym(token)) {
          flag_once(missing, seen_missing, token, "background explanation is needed");
        }
      } else if (persona_id == "non_native") {
        if (all_alpha(token) && !is_acronym(token) &&
            out_of_list(token, options.familiar_words) && text::count_syllables(token) >= 3) {
          flag_once(unknown, seen_unknown, token, "I don't know this word");
        }
        // Mid-sentence runs of capitalized words stand in for unexplained
        // institutions ("Government Accountability Office").
        if (i > 0 && i + 1 < sentence.tokens.size() && all_alpha(token) &&
            std::isupper(static_cast<unsigned char>(token[0])) && !is_acronym(token)) {
          const std::string& next = sentence.tokens[i + 1];
          if (all_alpha(next) && std::isupper(static_cast<unsigned char>(next[0])) &&
              !is_acronym(next)) {
            flag_once(missing, seen_missing, token + " " + next,
                      "the cultural context is missing");
          }
        }
      } else if (persona_id == "attention_deficit") {
        bool visually_complex =
            (all_alpha(token) && token.size() >= 12) ||
            (token.find('-') != std::string::npos && out_of_list(token, options.familiar_words));
        if (visually_complex) {
          flag_once(unknown, seen_unknown, token, "the word is hard to decode");
        }
        if (is_acronym(token)) {
          flag_once(missing, seen_missing, token, "more background is needed to follow this");
        }
      } else if (persona_id == "senior") {
        if (all_alpha(token) && !is_acronym(token) &&
            out_of_list(token, options.familiar_words) && text::count_syllables(token) >= 4) {
          flag_once(unknown, seen_unknown, token, "this word is unfamiliar to me");
        }
        if (is_acronym(token)) {
          flag_once(missing, seen_missing, token, "I do not know this organization");
        }
      } else if (persona_id == "learning_difficulties") {
        if (all_alpha(token) && token.size() >= 10 && !is_acronym(token) &&
            out_of_list(token, options.familiar_words)) {
          flag_once(unknown, seen_unknown, token, "I would have to reread this word");
        }
        if (is_acronym(token)) {
          flag_once(missing, seen_missing, token, "this needs an explanation first");
        }
      }
    }

    if (persona_id == "elementary") {
      if (long_sentence || subordinate >= 2) {
        flag_once(confusing, seen_confusing, sentence.text, "the sentence is too long");
      }
    } else if (persona_id == "non_native") {
      if (passives >= 2 || relatives >= 2) {
        flag_once(confusing, seen_confusing, sentence.text,
                  "the sentence structure is too complicated");
      }
    } else if (persona_id == "attention_deficit") {
      if (long_sentence || relatives >= 2) {
        flag_once(confusing, seen_confusing, sentence.text,
                  "the long sentence makes it hard to stay focused");
      }
    } else if (persona_id == "senior") {
      if (sentence.word_count > 18 || passives >= 2) {
        flag_once(confusing, seen_confusing, sentence.text,
                  "this sentence is too long for me");
      }
    } else if (persona_id == "learning_difficulties") {
      if (long_sentence || subordinate >= 2) {
        flag_once(confusing, seen_confusing, sentence.text,
                  "I had to reread this sentence");
      }
    }
  }
  return feedback_json(unknown, missing, confusing).dump();
}

inline std::string planner_reply(const std::string& document) {
  std::string lower = strings::lower(document);
  auto score = [&](std::initializer_list<const char*> needles) {
    std::size_t n = 0;
    for (const char* needle : needles) {
      std::size_t pos = 0;
      while ((pos = lower.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += std::string(needle).size();
      }
    }
    return n;
  };
  std::size_t patent = score({"patent", "claim", "invention", "embodiment"});
  std::size_t bill = score({"bill", " act ", "section", "subsection", "amend", "congress"});
  std::size_t policy = score({"gao", "agency", "federal", "policy", "recommend", "report"});
  std::size_t academic = score({"study", "method", "results", "abstract", "experiment"});

  Genre genre = Genre::AcademicPaper;
  std::size_t best = academic;
  if (policy > best) {
    genre = Genre::PolicyReport;
    best = policy;
  }
  if (bill > best) {
    genre = Genre::LegislativeBill;
    best = bill;
  }
  if (patent > best) {
    genre = Genre::PatentDocument;
  }
  return Json{{"document_type", to_string(genre)},
              {"expert", to_string(expert_for(genre))}}
      .dump();
}

inline std::string draft_reply(const std::string& document, const MockAgentOptions& options) {
  text::TokenizedText tokenized = text::tokenize(document, options.tokenizer);
  std::string draft;
  std::size_t limit = static_cast<std::size_t>(options.draft_sentences);
  for (std::size_t i = 0; i < tokenized.sentences.size() && i < limit; ++i) {
    if (!draft.empty()) draft.push_back(' ');
    draft += tokenized.sentences[i].text;
  }
  return draft;
}

/// Splits a flagged sentence at its midpoint word boundary into two shorter
/// sentences.
inline std::string split_sentence(const std::string& sentence) {
  std::vector<std::string> words = strings::split_whitespace(sentence);
  if (words.size() < 4) return sentence;
  std::size_t mid = words.size() / 2;
  std::string first, second;
  for (std::size_t i = 0; i < mid; ++i) {
    if (!first.empty()) first.push_back(' ');
    first += words[i];
  }
  while (!first.empty() && (first.back() == ',' || first.back() == ';')) first.pop_back();
  if (first.empty() || (first.back() != '.' && first.back() != '!' && first.back() != '?')) {
    first.push_back('.');
  }
  for (std::size_t i = mid; i < words.size(); ++i) {
    if (!second.empty()) second.push_back(' ');
    second += words[i];
  }
  if (!second.empty()) {
    second[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(second[0])));
    if (second.back() != '.' && second.back() != '!' && second.back() != '?') {
      second.push_back('.');
    }
  }
  return first + " " + second;
}

inline std::string revise_reply(const std::string& prompt) {
  std::string document;
  try {
    document = extract_block(prompt, "[DOCUMENT]", "[/DOCUMENT]");
  } catch (const Error&) {
    document.clear();
  }
  Json checklist = Json::parse(extract_block(prompt, "[CHECKLIST]", "[/CHECKLIST]"));
  std::string document_lower = strings::lower(document);

  Json revisions = Json::array();
  for (const auto& item : checklist.value("unknown_terms", Json::array())) {
    revisions.push_back(Json{{"kind", "replace_term"},
                             {"original", item.at("excerpt").get<std::string>()},
                             {"replacement", "a simple thing"},
                             {"rationale", "replace the difficult term"},
                             {"source_issue", item.value("id", "")}});
  }
  for (const auto& item : checklist.value("missing_contexts", Json::array())) {
    std::string excerpt = item.at("excerpt").get<std::string>();
    bool supported =
        !document_lower.empty() &&
        document_lower.find(strings::lower(strings::collapse_whitespace(excerpt))) !=
            std::string::npos;
    if (supported) {
      revisions.push_back(Json{{"kind", "add_context"},
                               {"original", excerpt},
                               {"replacement", excerpt + " (a group that does this work)"},
                               {"rationale", "add the missing background"},
                               {"source_issue", item.value("id", "")}});
    } else {
      revisions.push_back(Json{{"kind", "insufficient_information"},
                               {"original", excerpt},
                               {"replacement", ""},
                               {"rationale", "the source does not explain this"},
                               {"source_issue", item.value("id", "")}});
    }
  }
  for (const auto& item : checklist.value("confusing_sentences", Json::array())) {
    std::string excerpt = item.at("excerpt").get<std::string>();
    std::string rewritten = split_sentence(excerpt);
    if (rewritten == excerpt) continue;  // too short to split
    revisions.push_back(Json{{"kind", "rewrite_sentence"},
                             {"original", excerpt},
                             {"replacement", rewritten},
                             {"rationale", "split the long sentence"},
                             {"source_issue", item.value("id", "")}});
  }
  return Json{{"revisions", revisions}}.dump();
}

inline std::string editor_reply(const std::string& prompt) {
  std::string paragraph = extract_block(prompt, "[PARAGRAPH]", "[/PARAGRAPH]");
  Json revisions = Json::parse(extract_block(prompt, "[REVISIONS]", "[/REVISIONS]"));
  std::vector<RevisionProposal> proposals;
  for (const auto& entry : revisions) {
    RevisionProposal proposal;
    proposal.kind = revision_kind_from_string(entry.at("kind").get<std::string>());
    proposal.original = entry.at("original").get<std::string>();
    proposal.replacement = entry.value("replacement", std::string{});
    proposals.push_back(std::move(proposal));
  }
  editor::EditPlan plan = editor::plan_edits(paragraph, proposals);
  auto [revised, outcomes] = editor::apply_edits(paragraph, plan);
  (void)outcomes;
  return revised;
}

}  // namespace detail

inline void install_mock_agents(gateway::ScriptedBackend& backend, MockAgentOptions options) {
  auto shared = std::make_shared<MockAgentOptions>(std::move(options));

  backend.set_handler("planner", [](const gateway::ChatRequest& request, const gateway::CallTag&) {
    return detail::planner_reply(
        detail::extract_block(detail::prompt_text(request), "[DOCUMENT]", "[/DOCUMENT]"));
  });
  backend.set_handler("expert_draft",
                      [shared](const gateway::ChatRequest& request, const gateway::CallTag&) {
                        return detail::draft_reply(
                            detail::extract_block(detail::prompt_text(request), "[DOCUMENT]",
                                                  "[/DOCUMENT]"),
                            *shared);
                      });
  backend.set_handler("expert_revise",
                      [](const gateway::ChatRequest& request, const gateway::CallTag&) {
                        return detail::revise_reply(detail::prompt_text(request));
                      });
  backend.set_handler("editor", [](const gateway::ChatRequest& request, const gateway::CallTag&) {
    return detail::editor_reply(detail::prompt_text(request));
  });
  for (const char* persona :
       {"elementary", "non_native", "attention_deficit", "senior", "learning_difficulties"}) {
    std::string persona_id = persona;
    backend.set_handler("reader_" + persona_id,
                        [shared, persona_id](const gateway::ChatRequest& request,
                                             const gateway::CallTag&) {
                          return detail::reader_reply(
                              persona_id,
                              detail::extract_block(detail::prompt_text(request), "[PARAGRAPH]",
                                                    "[/PARAGRAPH]"),
                              *shared);
                        });
  }
}

}  // namespace nrlb::agents::mock
