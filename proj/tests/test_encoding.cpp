#include <catch2/catch.hpp>

#include "stylebench/chess/encode.hpp"
#include "stylebench/chess/movegen.hpp"
#include "stylebench/dataset/labels.hpp"
#include "stylebench/util/rng.hpp"

using namespace stylebench;
using namespace stylebench::chess;

TEST_CASE("encode_position: start position has 352 ones") {
  // 32 occupancy + 64 side-to-move + 4*64 castling + 0 en passant.
  EncodedPosition e = encode_position(start_position());
  CHECK(e.ones() == 352);
}

TEST_CASE("encode_position: after e2e4 there are 289 ones") {
  // 32 occupancy + 0 (black to move) + 256 castling + 1 en-passant one-hot.
  BoardState s = apply_move(start_position(), parse_uci("e2e4"));
  EncodedPosition e = encode_position(s);
  CHECK(e.ones() == 289);
  CHECK(e.values[17 * 64 + size_t(parse_square("e3"))] == 1);
}

TEST_CASE("encode_position: bare broadcast planes leave piece count only") {
  BoardState s = parse_fen("4k3/8/8/8/8/8/8/4K3 b - - 0 1");
  CHECK(encode_position(s).ones() == 2);
}

TEST_CASE("encode_position: plane structure invariants") {
  Rng rng(123);
  BoardState s = start_position();
  for (int ply = 0; ply < 40; ++ply) {
    const auto legal = legal_moves(s);
    if (legal.empty()) break;
    s = apply_move_unchecked(s, legal[size_t(rng.next_below(legal.size()))]);
    EncodedPosition e = encode_position(s);
    for (uint8_t v : e.values) CHECK((v == 0 || v == 1));
    int pieces = 0;
    for (size_t i = 0; i < 12 * 64; ++i) pieces += e.values[i];
    int expected = 0;
    for (Square sq = 0; sq < 64; ++sq)
      if (s.at(sq) != kNoPiece) ++expected;
    CHECK(pieces == expected);
    CHECK(pieces <= 32);
    // broadcast planes are constant
    for (size_t plane = 12; plane <= 16; ++plane)
      for (size_t i = 1; i < 64; ++i)
        CHECK(e.values[plane * 64 + i] == e.values[plane * 64]);
    int ep_ones = 0;
    for (size_t i = 17 * 64; i < 18 * 64; ++i) ep_ones += e.values[i];
    CHECK(ep_ones <= 1);
  }
}

TEST_CASE("encode_position is injective on the encoded fields") {
  // States differing in placement, stm, castling, or ep produce distinct vectors.
  BoardState a = start_position();
  BoardState b = a;
  b.side_to_move = Color::Black;
  b.ep_square = -1;
  CHECK(!(encode_position(a) == encode_position(b)));
  BoardState c = a;
  c.castling = uint8_t(c.castling & ~kCastleBQ);
  CHECK(!(encode_position(a) == encode_position(c)));
  BoardState d = apply_move(a, parse_uci("e2e4"));
  BoardState e = d;
  e.ep_square = -1;
  CHECK(!(encode_position(d) == encode_position(e)));
}

TEST_CASE("move labels: worked examples") {
  using dataset::label_move;
  using dataset::move_label;
  CHECK(move_label(parse_uci("e2e4")) == 3980);
  CHECK(move_label(parse_uci("e7e8q")) == 16944);
  CHECK_THROWS_AS(label_move(dataset::kLabelSpace), DataError);
}

TEST_CASE("move labels: round trip over random legal moves") {
  Rng rng(9);
  BoardState s = start_position();
  int checked = 0;
  while (checked < 1000) {
    const auto legal = legal_moves(s);
    if (legal.empty() || s.halfmove_clock >= 100) {
      s = start_position();
      continue;
    }
    for (const Move& m : legal) {
      CHECK(dataset::label_move(dataset::move_label(m)) == m);
      ++checked;
    }
    s = apply_move_unchecked(s, legal[size_t(rng.next_below(legal.size()))]);
  }
}

TEST_CASE("move label order matches the (from, to, promotion) move order") {
  BoardState s = parse_fen("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8");
  const auto legal = legal_moves(s);
  for (size_t i = 1; i < legal.size(); ++i)
    CHECK(dataset::move_label(legal[i - 1]) < dataset::move_label(legal[i]));
}
