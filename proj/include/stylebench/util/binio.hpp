#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "stylebench/util/errors.hpp"

namespace stylebench {

// Little-endian writers/readers; file formats are LE regardless of host.
class BinWriter {
 public:
  void u8(uint8_t v) { bytes_.push_back(char(v)); }
  void u16(uint16_t v) { append_le(v, 2); }
  void u32(uint32_t v) { append_le(v, 4); }
  void u64(uint64_t v) { append_le(v, 8); }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void str(const std::string& s) {
    u32(uint32_t(s.size()));
    bytes_.append(s);
  }
  void raw(const void* data, size_t n) { bytes_.append(static_cast<const char*>(data), n); }

  const std::string& bytes() const { return bytes_; }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write(bytes_.data(), std::streamsize(bytes_.size()));
    if (!out) throw DataError("write failed: " + path);
  }

 private:
  void append_le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(char((v >> (8 * i)) & 0xff));
  }
  std::string bytes_;
};

class BinReader {
 public:
  explicit BinReader(std::string bytes) : bytes_(std::move(bytes)) {}

  static BinReader from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return BinReader(std::move(data));
  }

  uint8_t u8() { return uint8_t(take(1)[0]); }
  uint16_t u16() { return uint16_t(read_le(2)); }
  uint32_t u32() { return uint32_t(read_le(4)); }
  uint64_t u64() { return read_le(8); }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    const char* p = take(n);
    return std::string(p, n);
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const char* take(size_t n) {
    if (pos_ + n > bytes_.size()) throw DataError("truncated binary input");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  uint64_t read_le(int n) {
    const char* p = take(size_t(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= uint64_t(uint8_t(p[i])) << (8 * i);
    return v;
  }
  std::string bytes_;
  size_t pos_ = 0;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open: " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace stylebench
