#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include "rkt/errors.hpp"

namespace rkt {

// FNV-1a 64-bit; used for config fingerprints and input-file digests.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t state = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ull;
  }
  return state;
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file for digest: " + path);
  std::uint64_t state = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    state = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), state);
  return to_hex(state);
}

}  // namespace rkt
