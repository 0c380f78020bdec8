#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nrlb::strings {

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline bool is_alpha(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

inline char to_lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(to_lower(c));
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

inline std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      ++n;
      in_word = true;
    }
  }
  return n;
}

/// Keeps the first `max_words` whitespace-separated words of `s`.
inline std::string truncate_words(std::string_view s, std::size_t max_words) {
  std::size_t i = 0;
  std::size_t words = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) break;
    if (words == max_words) break;
    while (i < s.size() && !is_space(s[i])) ++i;
    ++words;
  }
  return std::string(trim(s.substr(0, i)));
}

/// Collapses every run of whitespace to a single space and trims the ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

/// Case-folded, whitespace-collapsed form used as a cross-agent identity key.
inline std::string normalized_key(std::string_view s) {
  return lower(collapse_whitespace(s));
}

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive byte offset
  std::size_t length() const { return end - begin; }
  bool overlaps(const Span& other) const {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const Span&) const = default;
};

/// Finds the first occurrence of `needle` in `haystack` treating any run of
/// whitespace as equivalent to a single space (matching stays case-sensitive).
/// Returns the raw byte span in `haystack`, or nullopt.
inline std::optional<Span> find_normalized(std::string_view haystack,
                                           std::string_view needle,
                                           std::size_t from = 0) {
  std::string n = collapse_whitespace(needle);
  if (n.empty()) return std::nullopt;
  // Normalize the haystack once, remembering where each kept byte came from.
  std::string h;
  std::vector<std::size_t> origin;
  h.reserve(haystack.size());
  origin.reserve(haystack.size());
  bool pending_space = false;
  for (std::size_t i = from; i < haystack.size(); ++i) {
    char c = haystack[i];
    if (is_space(c)) {
      pending_space = !h.empty();
    } else {
      if (pending_space) {
        h.push_back(' ');
        origin.push_back(i);  // position of the char after the gap
        pending_space = false;
      }
      h.push_back(c);
      origin.push_back(i);
    }
  }
  std::size_t pos = h.find(n);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t raw_begin = origin[pos];
  std::size_t raw_end = origin[pos + n.size() - 1] + 1;
  return Span{raw_begin, raw_end};
}

inline bool contains_normalized(std::string_view haystack, std::string_view needle) {
  return find_normalized(haystack, needle).has_value();
}

/// Number of UTF-8 code points (continuation bytes are not counted).
inline std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace nrlb::strings
