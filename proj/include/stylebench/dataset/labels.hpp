#pragma once

#include <cstdint>

#include "stylebench/chess/board.hpp"

namespace stylebench::dataset {

// Move label space: ((from*64)+to)*5 + promo, promo in {none=0, N=1, B=2, R=3, Q=4}.
constexpr uint32_t kLabelSpace = 64 * 64 * 5;  // 20480

inline uint16_t move_label(const chess::Move& m) {
  return uint16_t(((uint32_t(m.from) * 64 + uint32_t(m.to)) * 5) + uint32_t(m.promo));
}

inline chess::Move label_move(uint32_t label) {
  if (label >= kLabelSpace) throw DataError("move label out of range: " + std::to_string(label));
  chess::Move m;
  m.promo = chess::Promotion(label % 5);
  const uint32_t ft = label / 5;
  m.to = uint8_t(ft % 64);
  m.from = uint8_t(ft / 64);
  return m;
}

}  // namespace stylebench::dataset
