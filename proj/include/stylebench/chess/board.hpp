#pragma once

#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>

#include "stylebench/util/errors.hpp"
#include "stylebench/util/rng.hpp"

namespace stylebench::chess {

enum class Color : uint8_t { White = 0, Black = 1 };

inline Color opponent(Color c) { return c == Color::White ? Color::Black : Color::White; }

enum class PieceType : uint8_t { Pawn = 0, Knight, Bishop, Rook, Queen, King };

// Piece code: 0 empty, 1..6 white P N B R Q K, 7..12 black.
using Piece = uint8_t;
constexpr Piece kNoPiece = 0;

inline Piece make_piece(Color c, PieceType t) {
  return Piece(1 + int(t) + (c == Color::Black ? 6 : 0));
}
inline Color piece_color(Piece p) { return p <= 6 ? Color::White : Color::Black; }
inline PieceType piece_type(Piece p) { return PieceType((p - 1) % 6); }

// Squares: 0..63, a1 = 0, square = rank*8 + file.
using Square = int;
inline int rank_of(Square s) { return s >> 3; }
inline int file_of(Square s) { return s & 7; }
inline Square make_square(int rank, int file) { return rank * 8 + file; }
inline bool on_board(int rank, int file) {
  return rank >= 0 && rank < 8 && file >= 0 && file < 8;
}

inline std::string square_name(Square s) {
  std::string n;
  n += char('a' + file_of(s));
  n += char('1' + rank_of(s));
  return n;
}

inline Square parse_square(std::string_view name) {
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' || name[1] > '8')
    throw DataError("bad square name: " + std::string(name));
  return make_square(name[1] - '1', name[0] - 'a');
}

enum class Promotion : uint8_t { None = 0, Knight = 1, Bishop = 2, Rook = 3, Queen = 4 };

struct Move {
  uint8_t from = 0;
  uint8_t to = 0;
  Promotion promo = Promotion::None;

  friend bool operator==(const Move&, const Move&) = default;
  // Ordering by (from, to, promotion) — the canonical move order everywhere.
  friend auto operator<=>(const Move& a, const Move& b) {
    if (auto c = a.from <=> b.from; c != 0) return c;
    if (auto c = a.to <=> b.to; c != 0) return c;
    return uint8_t(a.promo) <=> uint8_t(b.promo);
  }
};

inline PieceType promo_piece_type(Promotion p) {
  switch (p) {
    case Promotion::Knight: return PieceType::Knight;
    case Promotion::Bishop: return PieceType::Bishop;
    case Promotion::Rook: return PieceType::Rook;
    case Promotion::Queen: return PieceType::Queen;
    default: throw DataError("promotion is none");
  }
}

// UCI long algebraic, e.g. "e2e4", "e7e8q".
inline std::string to_uci(const Move& m) {
  std::string s = square_name(m.from) + square_name(m.to);
  switch (m.promo) {
    case Promotion::Knight: s += 'n'; break;
    case Promotion::Bishop: s += 'b'; break;
    case Promotion::Rook: s += 'r'; break;
    case Promotion::Queen: s += 'q'; break;
    default: break;
  }
  return s;
}

inline Move parse_uci(std::string_view s) {
  if (s.size() != 4 && s.size() != 5) throw DataError("bad UCI move: " + std::string(s));
  Move m;
  m.from = uint8_t(parse_square(s.substr(0, 2)));
  m.to = uint8_t(parse_square(s.substr(2, 2)));
  if (s.size() == 5) {
    switch (std::tolower(s[4])) {
      case 'n': m.promo = Promotion::Knight; break;
      case 'b': m.promo = Promotion::Bishop; break;
      case 'r': m.promo = Promotion::Rook; break;
      case 'q': m.promo = Promotion::Queen; break;
      default: throw DataError("bad UCI promotion: " + std::string(s));
    }
  }
  return m;
}

// Castling rights bits.
enum : uint8_t { kCastleWK = 1, kCastleWQ = 2, kCastleBK = 4, kCastleBQ = 8 };

struct BoardState {
  std::array<Piece, 64> squares{};
  Color side_to_move = Color::White;
  uint8_t castling = 0;
  int8_t ep_square = -1;  // 0..63, -1 when absent
  int halfmove_clock = 0;
  int fullmove_number = 1;

  Piece at(Square s) const { return squares[size_t(s)]; }
  friend bool operator==(const BoardState&, const BoardState&) = default;
};

inline Square king_square(const BoardState& s, Color c) {
  Piece k = make_piece(c, PieceType::King);
  for (Square sq = 0; sq < 64; ++sq)
    if (s.squares[size_t(sq)] == k) return sq;
  throw DataError("no king on board");
}

namespace detail {
inline constexpr int kKnightSteps[8][2] = {{1, 2},  {2, 1},  {2, -1}, {1, -2},
                                           {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
inline constexpr int kKingSteps[8][2] = {{1, 0},  {1, 1},  {0, 1},  {-1, 1},
                                         {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
inline constexpr int kBishopDirs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
inline constexpr int kRookDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}  // namespace detail

inline bool is_square_attacked(const BoardState& s, Square target, Color by) {
  const int tr = rank_of(target), tf = file_of(target);
  // Pawns: a pawn of `by` attacks diagonally toward its forward direction.
  const int pr = by == Color::White ? tr - 1 : tr + 1;
  for (int df : {-1, 1}) {
    if (on_board(pr, tf + df) &&
        s.at(make_square(pr, tf + df)) == make_piece(by, PieceType::Pawn))
      return true;
  }
  for (const auto& d : detail::kKnightSteps) {
    int r = tr + d[0], f = tf + d[1];
    if (on_board(r, f) && s.at(make_square(r, f)) == make_piece(by, PieceType::Knight))
      return true;
  }
  for (const auto& d : detail::kKingSteps) {
    int r = tr + d[0], f = tf + d[1];
    if (on_board(r, f) && s.at(make_square(r, f)) == make_piece(by, PieceType::King))
      return true;
  }
  const Piece bishop = make_piece(by, PieceType::Bishop);
  const Piece rook = make_piece(by, PieceType::Rook);
  const Piece queen = make_piece(by, PieceType::Queen);
  for (const auto& d : detail::kBishopDirs) {
    int r = tr + d[0], f = tf + d[1];
    while (on_board(r, f)) {
      Piece p = s.at(make_square(r, f));
      if (p != kNoPiece) {
        if (p == bishop || p == queen) return true;
        break;
      }
      r += d[0];
      f += d[1];
    }
  }
  for (const auto& d : detail::kRookDirs) {
    int r = tr + d[0], f = tf + d[1];
    while (on_board(r, f)) {
      Piece p = s.at(make_square(r, f));
      if (p != kNoPiece) {
        if (p == rook || p == queen) return true;
        break;
      }
      r += d[0];
      f += d[1];
    }
  }
  return false;
}

inline bool in_check(const BoardState& s) {
  return is_square_attacked(s, king_square(s, s.side_to_move), opponent(s.side_to_move));
}

// Throws DataError when a BoardState invariant is violated.
inline void validate_state(const BoardState& s) {
  int kings[2] = {0, 0};
  for (Square sq = 0; sq < 64; ++sq) {
    Piece p = s.at(sq);
    if (p == kNoPiece) continue;
    if (p > 12) throw DataError("bad piece code");
    if (piece_type(p) == PieceType::King) kings[int(piece_color(p))]++;
    if (piece_type(p) == PieceType::Pawn && (rank_of(sq) == 0 || rank_of(sq) == 7))
      throw DataError("pawn on back rank");
  }
  if (kings[0] != 1 || kings[1] != 1) throw DataError("exactly one king per color required");
  if (s.ep_square >= 0) {
    int r = rank_of(s.ep_square);
    if (r != 2 && r != 5) throw DataError("en-passant square must be on rank 3 or 6");
  }
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("castling right without piece on home square: ") + what);
  };
  if (s.castling & kCastleWK)
    require(s.at(4) == make_piece(Color::White, PieceType::King) &&
                s.at(7) == make_piece(Color::White, PieceType::Rook),
            "K");
  if (s.castling & kCastleWQ)
    require(s.at(4) == make_piece(Color::White, PieceType::King) &&
                s.at(0) == make_piece(Color::White, PieceType::Rook),
            "Q");
  if (s.castling & kCastleBK)
    require(s.at(60) == make_piece(Color::Black, PieceType::King) &&
                s.at(63) == make_piece(Color::Black, PieceType::Rook),
            "k");
  if (s.castling & kCastleBQ)
    require(s.at(60) == make_piece(Color::Black, PieceType::King) &&
                s.at(56) == make_piece(Color::Black, PieceType::Rook),
            "q");
}

inline char piece_char(Piece p) {
  static const char* chars = "PNBRQK";
  char c = chars[int(piece_type(p))];
  return piece_color(p) == Color::White ? c : char(std::tolower(c));
}

inline BoardState parse_fen(const std::string& fen) {
  std::istringstream in(fen);
  std::string placement, stm, castle, ep;
  int halfmove = 0, fullmove = 1;
  in >> placement >> stm >> castle >> ep;
  if (!in.fail()) in >> halfmove;
  if (!in.fail()) in >> fullmove;
  if (placement.empty() || stm.empty() || castle.empty() || ep.empty())
    throw DataError("bad FEN: " + fen);

  BoardState s;
  int rank = 7, file = 0;
  for (char c : placement) {
    if (c == '/') {
      if (file != 8) throw DataError("bad FEN rank: " + fen);
      --rank;
      file = 0;
      if (rank < 0) throw DataError("too many FEN ranks: " + fen);
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
      if (file > 8) throw DataError("FEN rank overflow: " + fen);
    } else {
      Color color = std::isupper(c) ? Color::White : Color::Black;
      PieceType t;
      switch (std::tolower(c)) {
        case 'p': t = PieceType::Pawn; break;
        case 'n': t = PieceType::Knight; break;
        case 'b': t = PieceType::Bishop; break;
        case 'r': t = PieceType::Rook; break;
        case 'q': t = PieceType::Queen; break;
        case 'k': t = PieceType::King; break;
        default: throw DataError(std::string("bad FEN piece char: ") + c);
      }
      if (file > 7 || rank < 0) throw DataError("bad FEN geometry: " + fen);
      s.squares[size_t(make_square(rank, file))] = make_piece(color, t);
      ++file;
    }
  }
  if (rank != 0 || file != 8) throw DataError("incomplete FEN placement: " + fen);

  if (stm == "w")
    s.side_to_move = Color::White;
  else if (stm == "b")
    s.side_to_move = Color::Black;
  else
    throw DataError("bad FEN side to move: " + fen);

  if (castle != "-") {
    for (char c : castle) {
      switch (c) {
        case 'K': s.castling |= kCastleWK; break;
        case 'Q': s.castling |= kCastleWQ; break;
        case 'k': s.castling |= kCastleBK; break;
        case 'q': s.castling |= kCastleBQ; break;
        default: throw DataError("bad FEN castling field: " + fen);
      }
    }
  }
  if (ep != "-") s.ep_square = int8_t(parse_square(ep));
  s.halfmove_clock = halfmove;
  s.fullmove_number = fullmove;
  validate_state(s);
  return s;
}

inline std::string to_fen(const BoardState& s) {
  std::string out;
  for (int rank = 7; rank >= 0; --rank) {
    int empties = 0;
    for (int file = 0; file < 8; ++file) {
      Piece p = s.at(make_square(rank, file));
      if (p == kNoPiece) {
        ++empties;
      } else {
        if (empties) out += char('0' + empties);
        empties = 0;
        out += piece_char(p);
      }
    }
    if (empties) out += char('0' + empties);
    if (rank) out += '/';
  }
  out += s.side_to_move == Color::White ? " w " : " b ";
  if (s.castling == 0) {
    out += '-';
  } else {
    if (s.castling & kCastleWK) out += 'K';
    if (s.castling & kCastleWQ) out += 'Q';
    if (s.castling & kCastleBK) out += 'k';
    if (s.castling & kCastleBQ) out += 'q';
  }
  out += ' ';
  out += s.ep_square >= 0 ? square_name(s.ep_square) : "-";
  out += ' ' + std::to_string(s.halfmove_clock) + ' ' + std::to_string(s.fullmove_number);
  return out;
}

inline const std::string kStartFen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

inline BoardState start_position() {
  static const BoardState start = parse_fen(kStartFen);
  return start;
}

namespace detail {
struct ZobristTables {
  uint64_t piece[13][64];
  uint64_t side_black;
  uint64_t castling[4];
  uint64_t ep[64];
  ZobristTables() {
    uint64_t seed = 0x7a0b5157cbe5d131ull;
    for (auto& row : piece)
      for (auto& v : row) v = splitmix64(seed);
    side_black = splitmix64(seed);
    for (auto& v : castling) v = splitmix64(seed);
    for (auto& v : ep) v = splitmix64(seed);
  }
};
inline const ZobristTables& zobrist() {
  static const ZobristTables tables;
  return tables;
}
}  // namespace detail

inline uint64_t zobrist_key(const BoardState& s) {
  const auto& z = detail::zobrist();
  uint64_t h = 0;
  for (Square sq = 0; sq < 64; ++sq) {
    Piece p = s.at(sq);
    if (p != kNoPiece) h ^= z.piece[p][sq];
  }
  if (s.side_to_move == Color::Black) h ^= z.side_black;
  for (int bit = 0; bit < 4; ++bit)
    if (s.castling & (1 << bit)) h ^= z.castling[bit];
  if (s.ep_square >= 0) h ^= z.ep[s.ep_square];
  return h;
}

}  // namespace stylebench::chess
