#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "stylebench/chess/board.hpp"

namespace stylebench::chess {

namespace detail {

inline void push_pawn_targets(std::vector<Move>& out, Square from, Square to, int to_rank) {
  if (to_rank == 0 || to_rank == 7) {
    for (Promotion p : {Promotion::Knight, Promotion::Bishop, Promotion::Rook, Promotion::Queen})
      out.push_back({uint8_t(from), uint8_t(to), p});
  } else {
    out.push_back({uint8_t(from), uint8_t(to), Promotion::None});
  }
}

inline void pseudo_moves(const BoardState& s, std::vector<Move>& out) {
  const Color us = s.side_to_move;
  const Color them = opponent(us);
  const int forward = us == Color::White ? 1 : -1;
  const int start_rank = us == Color::White ? 1 : 6;

  for (Square from = 0; from < 64; ++from) {
    const Piece p = s.at(from);
    if (p == kNoPiece || piece_color(p) != us) continue;
    const int fr = rank_of(from), ff = file_of(from);
    switch (piece_type(p)) {
      case PieceType::Pawn: {
        const int r1 = fr + forward;
        if (on_board(r1, ff) && s.at(make_square(r1, ff)) == kNoPiece) {
          push_pawn_targets(out, from, make_square(r1, ff), r1);
          if (fr == start_rank && s.at(make_square(fr + 2 * forward, ff)) == kNoPiece)
            out.push_back({uint8_t(from), uint8_t(make_square(fr + 2 * forward, ff)),
                           Promotion::None});
        }
        for (int df : {-1, 1}) {
          if (!on_board(r1, ff + df)) continue;
          const Square to = make_square(r1, ff + df);
          const Piece victim = s.at(to);
          if (victim != kNoPiece && piece_color(victim) == them)
            push_pawn_targets(out, from, to, r1);
          else if (to == s.ep_square)
            out.push_back({uint8_t(from), uint8_t(to), Promotion::None});
        }
        break;
      }
      case PieceType::Knight:
        for (const auto& d : kKnightSteps) {
          int r = fr + d[0], f = ff + d[1];
          if (!on_board(r, f)) continue;
          Piece t = s.at(make_square(r, f));
          if (t == kNoPiece || piece_color(t) == them)
            out.push_back({uint8_t(from), uint8_t(make_square(r, f)), Promotion::None});
        }
        break;
      case PieceType::King:
        for (const auto& d : kKingSteps) {
          int r = fr + d[0], f = ff + d[1];
          if (!on_board(r, f)) continue;
          Piece t = s.at(make_square(r, f));
          if (t == kNoPiece || piece_color(t) == them)
            out.push_back({uint8_t(from), uint8_t(make_square(r, f)), Promotion::None});
        }
        break;
      case PieceType::Bishop:
      case PieceType::Rook:
      case PieceType::Queen: {
        const PieceType t = piece_type(p);
        const bool diag = t == PieceType::Bishop || t == PieceType::Queen;
        const bool line = t == PieceType::Rook || t == PieceType::Queen;
        auto slide = [&](const int dirs[4][2]) {
          for (int i = 0; i < 4; ++i) {
            int r = fr + dirs[i][0], f = ff + dirs[i][1];
            while (on_board(r, f)) {
              Piece victim = s.at(make_square(r, f));
              if (victim == kNoPiece) {
                out.push_back({uint8_t(from), uint8_t(make_square(r, f)), Promotion::None});
              } else {
                if (piece_color(victim) == them)
                  out.push_back({uint8_t(from), uint8_t(make_square(r, f)), Promotion::None});
                break;
              }
              r += dirs[i][0];
              f += dirs[i][1];
            }
          }
        };
        if (diag) slide(kBishopDirs);
        if (line) slide(kRookDirs);
        break;
      }
    }
  }

  // Castling: generated fully legal (rights, empty path, no attacked square).
  const int home = us == Color::White ? 0 : 7;
  const Square king_from = make_square(home, 4);
  const uint8_t kside = us == Color::White ? kCastleWK : kCastleBK;
  const uint8_t qside = us == Color::White ? kCastleWQ : kCastleBQ;
  if ((s.castling & (kside | qside)) && !is_square_attacked(s, king_from, them)) {
    if ((s.castling & kside) && s.at(make_square(home, 5)) == kNoPiece &&
        s.at(make_square(home, 6)) == kNoPiece &&
        !is_square_attacked(s, make_square(home, 5), them) &&
        !is_square_attacked(s, make_square(home, 6), them))
      out.push_back({uint8_t(king_from), uint8_t(make_square(home, 6)), Promotion::None});
    if ((s.castling & qside) && s.at(make_square(home, 3)) == kNoPiece &&
        s.at(make_square(home, 2)) == kNoPiece && s.at(make_square(home, 1)) == kNoPiece &&
        !is_square_attacked(s, make_square(home, 3), them) &&
        !is_square_attacked(s, make_square(home, 2), them))
      out.push_back({uint8_t(king_from), uint8_t(make_square(home, 2)), Promotion::None});
  }
}

// Rights cleared when a king or rook leaves (or a rook is captured on) its home square.
inline uint8_t castling_mask(Square sq) {
  switch (sq) {
    case 0: return uint8_t(~kCastleWQ);
    case 4: return uint8_t(~(kCastleWK | kCastleWQ));
    case 7: return uint8_t(~kCastleWK);
    case 56: return uint8_t(~kCastleBQ);
    case 60: return uint8_t(~(kCastleBK | kCastleBQ));
    case 63: return uint8_t(~kCastleBK);
    default: return 0xff;
  }
}

}  // namespace detail

inline bool is_capture(const BoardState& s, const Move& m) {
  if (s.at(m.to) != kNoPiece) return true;
  return piece_type(s.at(m.from)) == PieceType::Pawn && m.to == s.ep_square;
}

// Applies a move assuming it is legal; no validation.
inline BoardState apply_move_unchecked(const BoardState& s, const Move& m) {
  BoardState r = s;
  const Piece moving = s.at(m.from);
  const Color us = piece_color(moving);
  const bool pawn = piece_type(moving) == PieceType::Pawn;
  const bool ep_capture = pawn && m.to == s.ep_square && s.at(m.to) == kNoPiece;
  const bool capture = s.at(m.to) != kNoPiece || ep_capture;

  r.ep_square = -1;
  r.squares[m.from] = kNoPiece;
  r.squares[m.to] = m.promo == Promotion::None ? moving : make_piece(us, promo_piece_type(m.promo));

  if (ep_capture) r.squares[size_t(make_square(rank_of(m.from), file_of(m.to)))] = kNoPiece;

  if (pawn && (int(m.to) - int(m.from) == 16 || int(m.from) - int(m.to) == 16))
    r.ep_square = int8_t((int(m.from) + int(m.to)) / 2);

  if (piece_type(moving) == PieceType::King && file_of(m.from) == 4) {
    const int home = rank_of(m.from);
    if (file_of(m.to) == 6) {  // king side: rook h -> f
      r.squares[size_t(make_square(home, 5))] = r.squares[size_t(make_square(home, 7))];
      r.squares[size_t(make_square(home, 7))] = kNoPiece;
    } else if (file_of(m.to) == 2) {  // queen side: rook a -> d
      r.squares[size_t(make_square(home, 3))] = r.squares[size_t(make_square(home, 0))];
      r.squares[size_t(make_square(home, 0))] = kNoPiece;
    }
  }

  r.castling &= detail::castling_mask(m.from) & detail::castling_mask(m.to);
  r.halfmove_clock = (pawn || capture) ? 0 : s.halfmove_clock + 1;
  if (us == Color::Black) r.fullmove_number = s.fullmove_number + 1;
  r.side_to_move = opponent(us);
  return r;
}

// Exactly the legal moves, ordered by (from, to, promotion) ascending.
inline std::vector<Move> legal_moves(const BoardState& s) {
  std::vector<Move> pseudo;
  pseudo.reserve(48);
  detail::pseudo_moves(s, pseudo);
  std::vector<Move> legal;
  legal.reserve(pseudo.size());
  const Color us = s.side_to_move;
  for (const Move& m : pseudo) {
    BoardState next = apply_move_unchecked(s, m);
    if (!is_square_attacked(next, king_square(next, us), next.side_to_move)) legal.push_back(m);
  }
  std::sort(legal.begin(), legal.end());
  return legal;
}

inline bool has_legal_move(const BoardState& s) {
  std::vector<Move> pseudo;
  pseudo.reserve(48);
  detail::pseudo_moves(s, pseudo);
  const Color us = s.side_to_move;
  for (const Move& m : pseudo) {
    BoardState next = apply_move_unchecked(s, m);
    if (!is_square_attacked(next, king_square(next, us), next.side_to_move)) return true;
  }
  return false;
}

// Checked variant: throws DataError when the move is not legal in s.
inline BoardState apply_move(const BoardState& s, const Move& m) {
  const auto moves = legal_moves(s);
  if (!std::binary_search(moves.begin(), moves.end(), m))
    throw DataError("illegal move " + to_uci(m) + " in " + to_fen(s));
  return apply_move_unchecked(s, m);
}

inline uint64_t perft(const BoardState& s, int depth) {
  if (depth <= 0) return 1;
  std::vector<Move> pseudo;
  pseudo.reserve(48);
  detail::pseudo_moves(s, pseudo);
  const Color us = s.side_to_move;
  uint64_t nodes = 0;
  for (const Move& m : pseudo) {
    BoardState next = apply_move_unchecked(s, m);
    if (is_square_attacked(next, king_square(next, us), next.side_to_move)) continue;
    nodes += depth == 1 ? 1 : perft(next, depth - 1);
  }
  return nodes;
}

enum class StaticTerminal { None, Checkmate, Stalemate, FiftyMoveDraw };

// Terminal facts derivable from the state alone; repetition needs a history
// and is handled by the caller via zobrist_key counts.
inline StaticTerminal static_terminal(const BoardState& s) {
  if (!has_legal_move(s)) return in_check(s) ? StaticTerminal::Checkmate : StaticTerminal::Stalemate;
  if (s.halfmove_clock >= 100) return StaticTerminal::FiftyMoveDraw;
  return StaticTerminal::None;
}

}  // namespace stylebench::chess
