#pragma once

#include <array>
#include <cstdint>
#include <numeric>

#include "stylebench/chess/encode.hpp"
#include "stylebench/chess/movegen.hpp"

namespace stylebench::style {

// Concatenated before/after board encodings of one move; the unit of
// behavioral comparison.
struct TransitionVector {
  static constexpr size_t kSize = 2 * chess::EncodedPosition::kSize;  // 2304
  std::array<uint8_t, kSize> values{};

  int ones() const { return std::accumulate(values.begin(), values.end(), 0); }
  friend bool operator==(const TransitionVector&, const TransitionVector&) = default;
};

inline TransitionVector transition_vector(const chess::BoardState& state,
                                          const chess::Move& move) {
  const chess::BoardState after = chess::apply_move(state, move);  // throws if illegal
  TransitionVector t;
  const chess::EncodedPosition before_enc = chess::encode_position(state);
  const chess::EncodedPosition after_enc = chess::encode_position(after);
  std::copy(before_enc.values.begin(), before_enc.values.end(), t.values.begin());
  std::copy(after_enc.values.begin(), after_enc.values.end(),
            t.values.begin() + chess::EncodedPosition::kSize);
  return t;
}

}  // namespace stylebench::style
