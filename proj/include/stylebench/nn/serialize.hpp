#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stylebench/util/binio.hpp"

namespace stylebench::nn {

struct NamedTensor {
  std::string name;
  std::vector<uint32_t> dims;
  std::vector<double> values;

  size_t element_count() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return n;
  }
};

// Weight file: magic "SBW1", version u32, tensor count u32; per tensor:
// name (length-prefixed UTF-8), ndim u8, dims u32 each, float32 LE payload.
constexpr uint32_t kWeightFormatVersion = 1;

inline void save_weights(const std::string& path, std::span<const NamedTensor> tensors) {
  BinWriter w;
  w.raw("SBW1", 4);
  w.u32(kWeightFormatVersion);
  w.u32(uint32_t(tensors.size()));
  for (const NamedTensor& t : tensors) {
    w.str(t.name);
    w.u8(uint8_t(t.dims.size()));
    for (uint32_t d : t.dims) w.u32(d);
    for (double v : t.values) w.f32(float(v));
  }
  w.write_file(path);
}

inline std::vector<NamedTensor> load_weights(const std::string& path) {
  BinReader r = BinReader::from_file(path);
  char magic[4];
  for (char& c : magic) c = char(r.u8());
  if (std::string_view(magic, 4) != "SBW1") throw DataError("not a weight file: " + path);
  const uint32_t version = r.u32();
  if (version != kWeightFormatVersion)
    throw DataError("unsupported weight format version " + std::to_string(version));
  const uint32_t count = r.u32();
  std::vector<NamedTensor> tensors(count);
  for (NamedTensor& t : tensors) {
    t.name = r.str();
    const uint8_t ndim = r.u8();
    t.dims.resize(ndim);
    for (uint32_t& d : t.dims) d = r.u32();
    t.values.resize(t.element_count());
    for (double& v : t.values) v = double(r.f32());
  }
  return tensors;
}

inline const NamedTensor* find_tensor(std::span<const NamedTensor> tensors,
                                      const std::string& name) {
  for (const NamedTensor& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

}  // namespace stylebench::nn
