#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nrlb/core/error.hpp"

namespace nrlb {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write file: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("short write: " + path.string());
  }
}

/// Splits file content into lines, accepting both LF and CRLF endings.
inline std::vector<std::string> split_lines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t nl = content.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < content.size()) lines.emplace_back(content.substr(start));
      break;
    }
    std::size_t end = nl;
    if (end > start && content[end - 1] == '\r') --end;
    lines.emplace_back(content.substr(start, end - start));
    start = nl + 1;
  }
  return lines;
}

/// Directory holding the word lists and prompt catalog. Resolution order:
/// explicit argument, NRLB_DATA_DIR environment variable, compiled-in default.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("NRLB_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef NRLB_DEFAULT_DATA_DIR
  return NRLB_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace nrlb
