#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nrlb {

/// 64-bit FNV-1a. Used for request/response hashes, cassette keys, and
/// manifest fingerprints; stable across platforms and runs.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

inline std::string content_hash(std::string_view data) {
  return hex64(fnv1a64(data));
}

}  // namespace nrlb
