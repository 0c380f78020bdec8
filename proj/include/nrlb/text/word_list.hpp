#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>

#include "nrlb/core/io.hpp"
#include "nrlb/core/strings.hpp"

namespace nrlb::text {

using WordSet = std::unordered_set<std::string>;

/// One lowercase word per line; blank lines and '#' comments are skipped.
/// Used for the Dale-Chall familiar-word list and any override supplied via
/// configuration.
inline WordSet load_word_list(const std::filesystem::path& path) {
  WordSet out;
  for (const auto& raw : split_lines(read_file(path))) {
    auto line = strings::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.insert(strings::lower(line));
  }
  return out;
}

inline std::filesystem::path familiar_words_path(const std::filesystem::path& data_dir) {
  return data_dir / "dale_chall_familiar_words.txt";
}

inline std::filesystem::path abbreviations_path(const std::filesystem::path& data_dir) {
  return data_dir / "abbreviations.txt";
}

}  // namespace nrlb::text
