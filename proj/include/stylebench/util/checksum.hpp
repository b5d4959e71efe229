#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace stylebench {

inline uint64_t fnv1a64_bytes(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t checksum_doubles(std::span<const double> values, uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64_bytes(values.data(), values.size() * sizeof(double), h);
}

inline std::string checksum_hex(uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[size_t(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace stylebench
