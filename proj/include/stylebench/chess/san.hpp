#pragma once

#include <string>
#include <vector>

#include "stylebench/chess/movegen.hpp"

namespace stylebench::chess {

namespace detail {

// Strips check/mate marks, annotations, "e.p.", and '='; normalizes 0-0 to O-O.
inline std::string normalize_san(std::string_view token) {
  std::string t;
  for (size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (c == '+' || c == '#' || c == '!' || c == '?' || c == '=') continue;
    if (c == 'e' && token.substr(i) == "e.p.") break;
    t += c == '0' ? 'O' : c;
  }
  return t;
}

}  // namespace detail

// Canonical SAN (without check/mate suffix) for a legal move; `legal` must be
// legal_moves(s) — disambiguation is computed against it.
inline std::string san_for_move(const BoardState& s, const Move& m,
                                const std::vector<Move>& legal) {
  const Piece piece = s.at(m.from);
  const PieceType type = piece_type(piece);

  if (type == PieceType::King && file_of(m.from) == 4) {
    if (file_of(m.to) == 6) return "O-O";
    if (file_of(m.to) == 2) return "O-O-O";
  }

  const bool capture = is_capture(s, m);
  std::string san;
  if (type == PieceType::Pawn) {
    if (capture) san = std::string(1, char('a' + file_of(m.from))) + "x";
    san += square_name(m.to);
    if (m.promo != Promotion::None) san += std::string("=") + "NBRQ"[int(m.promo) - 1];
    return san;
  }

  san += "PNBRQK"[int(type)];
  bool need_file = false, need_rank = false, ambiguous = false;
  for (const Move& other : legal) {
    if (other == m || other.to != m.to || other.from == m.from) continue;
    if (piece_type(s.at(other.from)) != type) continue;
    ambiguous = true;
    if (file_of(other.from) == file_of(m.from)) need_rank = true;
    if (rank_of(other.from) == rank_of(m.from)) need_file = true;
  }
  if (ambiguous && !need_file && !need_rank) need_file = true;
  if (need_file) san += char('a' + file_of(m.from));
  if (need_rank) san += char('1' + rank_of(m.from));
  if (capture) san += 'x';
  san += square_name(m.to);
  return san;
}

// SAN with '+' / '#' from the resulting position appended.
inline std::string san_for_move_decorated(const BoardState& s, const Move& m,
                                          const std::vector<Move>& legal) {
  std::string san = san_for_move(s, m, legal);
  BoardState next = apply_move_unchecked(s, m);
  if (in_check(next)) san += has_legal_move(next) ? "+" : "#";
  return san;
}

// Resolves a SAN token against the legal moves of s. Throws DataError when
// the token matches no legal move or is ambiguous.
inline Move parse_san(const BoardState& s, std::string_view token,
                      const std::vector<Move>& legal) {
  const std::string wanted = detail::normalize_san(token);
  Move found{};
  int matches = 0;
  for (const Move& m : legal) {
    if (detail::normalize_san(san_for_move(s, m, legal)) == wanted) {
      found = m;
      ++matches;
    }
  }
  if (matches == 1) return found;
  if (matches > 1) throw DataError("ambiguous SAN: " + std::string(token));
  throw DataError("SAN matches no legal move: " + std::string(token));
}

}  // namespace stylebench::chess
