#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nrlb/core/strings.hpp"
#include "nrlb/text/tokenizer.hpp"

namespace nrlb::text {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const RougeScore&) const = default;
};

struct RougeOptions {
  bool stemming = false;  // Porter stemmer; off by default
};

namespace detail {

// Porter (1980) stemmer, used only when RougeOptions::stemming is set.
class PorterStemmer {
public:
  static std::string stem(std::string word) {
    if (word.size() <= 2) return word;
    PorterStemmer s(std::move(word));
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    return s.w_;
  }

private:
  explicit PorterStemmer(std::string w) : w_(std::move(w)) {}

  bool is_consonant(std::size_t i) const {
    char c = w_[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 ? true : !is_consonant(i - 1);
    return true;
  }

  // Number of VC sequences in w_[0..end)
  std::size_t measure(std::size_t end) const {
    std::size_t m = 0;
    std::size_t i = 0;
    while (i < end && is_consonant(i)) ++i;
    while (i < end) {
      while (i < end && !is_consonant(i)) ++i;
      if (i >= end) break;
      ++m;
      while (i < end && is_consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i) {
      if (!is_consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t end) const {
    return end >= 2 && w_[end - 1] == w_[end - 2] && is_consonant(end - 1);
  }

  // consonant-vowel-consonant where the final consonant is not w, x, or y
  bool cvc(std::size_t end) const {
    if (end < 3) return false;
    if (!is_consonant(end - 3) || is_consonant(end - 2) || !is_consonant(end - 1)) return false;
    char c = w_[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() &&
           std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_end(std::string_view suffix) const { return w_.size() - suffix.size(); }

  void replace_suffix(std::string_view suffix, std::string_view repl) {
    w_.resize(w_.size() - suffix.size());
    w_.append(repl);
  }

  bool try_rule(std::string_view suffix, std::string_view repl, std::size_t min_measure) {
    if (!ends_with(suffix)) return false;
    if (measure(stem_end(suffix)) > min_measure - 1) {
      replace_suffix(suffix, repl);
    }
    return true;  // suffix matched: stop scanning this step's rule list
  }

  void step1a() {
    if (ends_with("sses")) {
      replace_suffix("sses", "ss");
    } else if (ends_with("ies")) {
      replace_suffix("ies", "i");
    } else if (!ends_with("ss") && ends_with("s")) {
      replace_suffix("s", "");
    }
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_end("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    bool fired = false;
    if (ends_with("ed") && has_vowel(stem_end("ed"))) {
      replace_suffix("ed", "");
      fired = true;
    } else if (ends_with("ing") && has_vowel(stem_end("ing"))) {
      replace_suffix("ing", "");
      fired = true;
    }
    if (!fired) return;
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_.push_back('e');
    } else if (double_consonant(w_.size())) {
      char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_end("y"))) {
      w_.back() = 'i';
    }
  }

  void step2() {
    static const std::pair<std::string_view, std::string_view> rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}};
    for (const auto& [suffix, repl] : rules) {
      if (try_rule(suffix, repl, 1)) return;
    }
  }

  void step3() {
    static const std::pair<std::string_view, std::string_view> rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
    for (const auto& [suffix, repl] : rules) {
      if (try_rule(suffix, repl, 1)) return;
    }
  }

  void step4() {
    static const std::string_view suffixes[] = {"al",  "ance", "ence", "er",  "ic",
                                                "able", "ible", "ant",  "ement", "ment",
                                                "ent", "ion",  "ou",   "ism", "ate",
                                                "iti", "ous",  "ive",  "ize"};
    for (std::string_view suffix : suffixes) {
      if (!ends_with(suffix)) continue;
      std::size_t end = stem_end(suffix);
      if (measure(end) > 1) {
        if (suffix == "ion" && !(end > 0 && (w_[end - 1] == 's' || w_[end - 1] == 't'))) {
          return;
        }
        replace_suffix(suffix, "");
      }
      return;
    }
  }

  void step5() {
    if (ends_with("e")) {
      std::size_t end = stem_end("e");
      std::size_t m = measure(end);
      if (m > 1 || (m == 1 && !cvc(end))) replace_suffix("e", "");
    }
    if (double_consonant(w_.size()) && w_.back() == 'l' && measure(w_.size()) > 1) {
      w_.pop_back();
    }
  }

  std::string w_;
};

inline std::vector<std::string> rouge_tokens(std::string_view s, const RougeOptions& options) {
  std::vector<std::string> out;
  for (const auto& piece : strings::split_whitespace(s)) {
    std::string token = strings::lower(detail::strip_token(piece));
    if (token.empty()) continue;
    if (options.stemming) token = PorterStemmer::stem(std::move(token));
    out.push_back(std::move(token));
  }
  return out;
}

}  // namespace detail

/// ROUGE-1: multiset unigram overlap. Tokens are case-folded and stripped of
/// edge punctuation. Empty candidate or reference yields the all-zero score.
inline RougeScore rouge1(std::string_view candidate, std::string_view reference,
                         const RougeOptions& options = RougeOptions{}) {
  auto cand = detail::rouge_tokens(candidate, options);
  auto ref = detail::rouge_tokens(reference, options);
  RougeScore score;
  if (cand.empty() || ref.empty()) return score;

  std::unordered_map<std::string, std::size_t> ref_counts;
  for (const auto& token : ref) ++ref_counts[token];
  std::size_t overlap = 0;
  for (const auto& token : cand) {
    auto it = ref_counts.find(token);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  score.precision = static_cast<double>(overlap) / static_cast<double>(cand.size());
  score.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  if (score.precision + score.recall > 0.0) {
    score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

}  // namespace nrlb::text
