#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nrlb/core/error.hpp"

namespace nrlb::gateway {

namespace detail {

/// Byte range of the first balanced {...} or [...] in `s`, string-aware.
/// Returns false when no opener exists; an unterminated value reports the
/// opener with end = npos.
inline bool find_json_span(std::string_view s, std::size_t& begin, std::size_t& end) {
  std::size_t start = s.find_first_of("{[");
  if (start == std::string_view::npos) return false;
  begin = start;
  end = std::string_view::npos;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      --depth;
      if (depth == 0) {
        end = i + 1;
        return true;
      }
    }
  }
  return true;
}

/// Removes commas that directly precede a closing brace/bracket (outside
/// strings). This is the single repair pass applied after a failed parse.
inline std::string strip_trailing_commas(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      out.push_back(c);
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    if (c == ',') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && (s[j] == '}' || s[j] == ']')) continue;  // drop the comma
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Extracts the first top-level JSON object or array from model output,
/// tolerating surrounding prose and code fences. One repair pass strips
/// trailing commas before giving up.
inline Json extract_json(std::string_view content) {
  std::size_t begin = 0;
  std::size_t end = 0;
  if (!detail::find_json_span(content, begin, end)) {
    throw NoJsonFoundError("no JSON object or array in model output");
  }
  std::string_view segment =
      end == std::string_view::npos ? content.substr(begin) : content.substr(begin, end - begin);
  Json parsed = Json::parse(segment, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded()) return parsed;
  parsed = Json::parse(detail::strip_trailing_commas(segment), nullptr, false);
  if (!parsed.is_discarded()) return parsed;
  throw JsonParseError("model output is not parseable JSON, even after repair");
}

}  // namespace nrlb::gateway
