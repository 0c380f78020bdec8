#pragma once

#include <cstddef>
#include <string_view>

#include "nrlb/core/error.hpp"
#include "nrlb/text/tokenizer.hpp"
#include "nrlb/text/word_list.hpp"

namespace nrlb::text {

struct ReadabilityReport {
  double fkgl = 0.0;
  double dcrs = 0.0;
  double cli = 0.0;
  double ari = 0.0;
  std::size_t word_count = 0;
  std::size_t sentence_count = 0;

  bool operator==(const ReadabilityReport&) const = default;
};

namespace detail {
inline void require_nonempty(const TokenizedText& t, const char* metric) {
  if (t.sentence_count() == 0 || t.total_words() == 0) {
    throw UndefinedInputError(std::string(metric) + " is undefined for empty text");
  }
}
}  // namespace detail

/// Flesch-Kincaid Grade Level:
/// 0.39 * words/sentence + 11.8 * syllables/word - 15.59
inline double fkgl(const TokenizedText& t) {
  detail::require_nonempty(t, "fkgl");
  double words = static_cast<double>(t.total_words());
  double sentences = static_cast<double>(t.sentence_count());
  double syllables = static_cast<double>(t.total_syllables());
  return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59;
}

/// Dale-Chall: 0.1579 * d + 0.0496 * words/sentence, plus 3.6365 when the
/// difficult-word percentage d exceeds 5. Lookup is case-folded set
/// membership against the familiar-word list.
inline double dcrs(const TokenizedText& t, const WordSet& familiar_words) {
  detail::require_nonempty(t, "dcrs");
  double words = static_cast<double>(t.total_words());
  double sentences = static_cast<double>(t.sentence_count());
  std::size_t difficult = 0;
  for (const auto& sentence : t.sentences) {
    for (const auto& token : sentence.tokens) {
      if (familiar_words.count(strings::lower(token)) == 0) ++difficult;
    }
  }
  double d = 100.0 * static_cast<double>(difficult) / words;
  double score = 0.1579 * d + 0.0496 * (words / sentences);
  if (d > 5.0) score += 3.6365;
  return score;
}

/// Coleman-Liau: 0.0588 * L - 0.296 * S - 15.8, with L = letters per 100
/// words and S = sentences per 100 words.
inline double cli(const TokenizedText& t) {
  detail::require_nonempty(t, "cli");
  double words = static_cast<double>(t.total_words());
  double letters_per_100 = 100.0 * static_cast<double>(t.total_letters()) / words;
  double sentences_per_100 = 100.0 * static_cast<double>(t.sentence_count()) / words;
  return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
}

/// Automated Readability Index:
/// 4.71 * chars/word + 0.5 * words/sentence - 21.43
inline double ari(const TokenizedText& t) {
  detail::require_nonempty(t, "ari");
  double words = static_cast<double>(t.total_words());
  double sentences = static_cast<double>(t.sentence_count());
  double chars = static_cast<double>(t.total_chars());
  return 4.71 * (chars / words) + 0.5 * (words / sentences) - 21.43;
}

inline ReadabilityReport readability_report(const TokenizedText& t,
                                            const WordSet& familiar_words) {
  ReadabilityReport r;
  r.word_count = t.total_words();
  r.sentence_count = t.sentence_count();
  r.fkgl = fkgl(t);
  r.dcrs = dcrs(t, familiar_words);
  r.cli = cli(t);
  r.ari = ari(t);
  return r;
}

/// ARI of a free-standing string; 0.0 when the string has no word token.
/// The checklist uses this for excerpts that have no enclosing sentence.
inline double ari_of(std::string_view text, const TokenizerOptions& options = TokenizerOptions{}) {
  TokenizedText t = tokenize(text, options);
  if (t.sentence_count() == 0 || t.total_words() == 0) return 0.0;
  return ari(t);
}

}  // namespace nrlb::text
