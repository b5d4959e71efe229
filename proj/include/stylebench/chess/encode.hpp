#pragma once

#include <array>
#include <cstdint>
#include <numeric>

#include "stylebench/chess/board.hpp"

namespace stylebench::chess {

// 18 planes of 8x8, flattened as value[plane*64 + square]:
//   0-5   white P N B R Q K occupancy
//   6-11  black P N B R Q K occupancy
//   12    all ones iff white to move
//   13-16 castling rights WK, WQ, BK, BQ (full-plane broadcast)
//   17    one-hot en-passant target square
struct EncodedPosition {
  static constexpr size_t kPlanes = 18;
  static constexpr size_t kSize = kPlanes * 64;  // 1152
  std::array<uint8_t, kSize> values{};

  int ones() const { return std::accumulate(values.begin(), values.end(), 0); }
  friend bool operator==(const EncodedPosition&, const EncodedPosition&) = default;
};

inline EncodedPosition encode_position(const BoardState& s) {
  EncodedPosition e;
  for (Square sq = 0; sq < 64; ++sq) {
    Piece p = s.at(sq);
    if (p == kNoPiece) continue;
    const size_t plane = size_t(piece_type(p)) + (piece_color(p) == Color::Black ? 6 : 0);
    e.values[plane * 64 + size_t(sq)] = 1;
  }
  if (s.side_to_move == Color::White)
    for (int i = 0; i < 64; ++i) e.values[12 * 64 + size_t(i)] = 1;
  const uint8_t rights[4] = {kCastleWK, kCastleWQ, kCastleBK, kCastleBQ};
  for (int bit = 0; bit < 4; ++bit) {
    if (s.castling & rights[bit])
      for (int i = 0; i < 64; ++i) e.values[size_t(13 + bit) * 64 + size_t(i)] = 1;
  }
  if (s.ep_square >= 0) e.values[17 * 64 + size_t(s.ep_square)] = 1;
  return e;
}

}  // namespace stylebench::chess
