#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nrlb/core/io.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::text {

/// One tokenized sentence with the counts the readability formulas consume.
/// char_count covers the non-whitespace characters of the word tokens
/// (code points, so accented words count once per letter); letter_count is
/// ASCII-alphabetic only, which keeps letter_count <= char_count.
struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  std::size_t word_count = 0;
  std::size_t letter_count = 0;
  std::size_t char_count = 0;
  std::size_t syllable_count = 0;

  bool operator==(const Sentence&) const = default;
};

struct TokenizedText {
  std::vector<Sentence> sentences;

  std::size_t sentence_count() const { return sentences.size(); }
  std::size_t total_words() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.word_count;
    return n;
  }
  std::size_t total_letters() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.letter_count;
    return n;
  }
  std::size_t total_chars() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.char_count;
    return n;
  }
  std::size_t total_syllables() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.syllable_count;
    return n;
  }

  bool operator==(const TokenizedText&) const = default;
};

/// Heuristic syllable count: contiguous vowel groups (a e i o u y), minus a
/// silent trailing "e" unless the word ends in consonant+"le"; never below 1.
inline std::size_t count_syllables(std::string_view word) {
  std::string w = strings::lower(word);
  auto is_vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  std::size_t groups = 0;
  bool in_group = false;
  for (char c : w) {
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  if (w.size() >= 2 && w.back() == 'e') {
    bool consonant_le = w.size() >= 3 && w[w.size() - 2] == 'l' &&
                        strings::is_alpha(w[w.size() - 3]) && !is_vowel(w[w.size() - 3]);
    if (!consonant_le && groups > 1) --groups;
  }
  return groups > 0 ? groups : 1;
}

/// Words before a period that do not end a sentence ("Dr.", "e.g.", ...).
/// Mirrors data/abbreviations.txt; lowercase, trailing period implied.
inline const std::unordered_set<std::string>& default_abbreviations() {
  static const std::unordered_set<std::string> guards = {
      "mr",  "mrs", "ms",   "dr",   "prof", "sr",   "jr",   "st",   "mt",
      "no",  "vs",  "etc",  "e.g",  "i.e",  "fig",  "figs", "eq",   "sec",
      "al",  "inc", "ltd",  "corp", "co",   "dept", "gov",  "sen",  "rep",
      "gen", "col", "capt", "lt",   "sgt",  "u.s",  "u.k",  "u.n",  "a.m",
      "p.m", "jan", "feb",  "mar",  "apr",  "jun",  "jul",  "aug",  "sep",
      "sept", "oct", "nov", "dec",  "vol",  "pp",   "ch",   "approx", "est"};
  return guards;
}

/// One token per line, trailing period implied; blank lines and '#' comments
/// are skipped.
inline std::unordered_set<std::string> load_abbreviations(const std::filesystem::path& path) {
  std::unordered_set<std::string> out;
  for (const auto& raw : split_lines(read_file(path))) {
    auto line = strings::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string token = strings::lower(line);
    if (!token.empty() && token.back() == '.') token.pop_back();
    out.insert(std::move(token));
  }
  return out;
}

struct TokenizerOptions {
  std::unordered_set<std::string> abbreviations = default_abbreviations();
};

namespace detail {

inline bool is_strip_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && !std::isalnum(u);
}

/// Strips leading/trailing ASCII punctuation; interior characters (hyphens,
/// apostrophes, "e.g" dots) are kept.
inline std::string strip_token(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && is_strip_char(token[b])) ++b;
  while (e > b && is_strip_char(token[e - 1])) --e;
  return std::string(token.substr(b, e - b));
}

/// The whitespace-delimited token that ends at `dot_pos` (exclusive),
/// lowercased and with leading punctuation stripped.
inline std::string word_before(std::string_view text, std::size_t dot_pos) {
  std::size_t begin = dot_pos;
  while (begin > 0 && !strings::is_space(text[begin - 1])) --begin;
  std::string w = strings::lower(text.substr(begin, dot_pos - begin));
  std::size_t b = 0;
  while (b < w.size() && is_strip_char(w[b])) ++b;
  return w.substr(b);
}

inline Sentence build_sentence(std::string_view raw) {
  Sentence s;
  s.text = std::string(strings::trim(raw));
  for (const auto& piece : strings::split_whitespace(s.text)) {
    std::string token = strip_token(piece);
    if (token.empty()) continue;
    s.char_count += strings::utf8_length(token);
    for (char c : token) {
      if (strings::is_alpha(c)) ++s.letter_count;
    }
    s.syllable_count += count_syllables(token);
    s.tokens.push_back(std::move(token));
  }
  s.word_count = s.tokens.size();
  return s;
}

}  // namespace detail

/// Splits on terminal punctuation (. ! ?) followed by whitespace or the end
/// of the text; a period preceded by a guarded abbreviation does not end the
/// sentence. Sentences without any word token are dropped, so whitespace-only
/// input yields zero sentences.
inline TokenizedText tokenize(std::string_view text,
                              const TokenizerOptions& options = TokenizerOptions{}) {
  TokenizedText out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    Sentence s = detail::build_sentence(text.substr(start, end - start));
    if (s.word_count > 0) out.sentences.push_back(std::move(s));
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool at_end = i + 1 == text.size();
    if (!at_end && !strings::is_space(text[i + 1])) continue;
    if (c == '.' && options.abbreviations.count(detail::word_before(text, i)) > 0) continue;
    flush(i + 1);
  }
  if (start < text.size()) flush(text.size());
  return out;
}

}  // namespace nrlb::text
