#pragma once

#include <map>
#include <string>
#include <vector>

#include "stylebench/chess/pgn.hpp"
#include "stylebench/util/rng.hpp"

namespace stylebench::eval {

// Scripted players with distinct, stochastic styles for synthetic experiments.
enum class ScriptedStyle { UniformRandom, MaterialGreedy, CenterControl };

inline const char* style_name(ScriptedStyle s) {
  switch (s) {
    case ScriptedStyle::UniformRandom: return "uniform";
    case ScriptedStyle::MaterialGreedy: return "greedy";
    case ScriptedStyle::CenterControl: return "center";
  }
  return "?";
}

namespace detail {

inline int victim_value(const chess::BoardState& s, const chess::Move& m) {
  using namespace chess;
  Piece victim = s.at(m.to);
  if (victim == kNoPiece) {
    if (piece_type(s.at(m.from)) == PieceType::Pawn && m.to == s.ep_square) return 1;
    return 0;
  }
  switch (piece_type(victim)) {
    case PieceType::Pawn: return 1;
    case PieceType::Knight:
    case PieceType::Bishop: return 3;
    case PieceType::Rook: return 5;
    case PieceType::Queen: return 9;
    default: return 0;
  }
}

inline double center_distance(chess::Square sq) {
  const double dr = std::abs(double(chess::rank_of(sq)) - 3.5);
  const double df = std::abs(double(chess::file_of(sq)) - 3.5);
  return std::max(dr, df);  // 0.5 at the four center squares, 3.5 at corners
}

}  // namespace detail

// Style sharpness knobs. The defaults make each style near-deterministic
// given the position (the random opponent keeps games diverse), which keeps
// the styles separable after dimensionality reduction.
struct StyleParams {
  double greedy_capture_prob = 0.99;
  double center_gamma = 9.0;  // weight = exp(-gamma * center distance)
};

inline chess::Move scripted_move(ScriptedStyle style, const chess::BoardState& state,
                                 const std::vector<chess::Move>& legal, Rng& rng,
                                 const StyleParams& params = {}) {
  switch (style) {
    case ScriptedStyle::UniformRandom:
      return legal[size_t(rng.next_below(legal.size()))];

    case ScriptedStyle::MaterialGreedy: {
      // Prefer the highest-value capture most of the time; the residual
      // randomness keeps games diverse.
      int best = 0;
      for (const auto& m : legal) best = std::max(best, detail::victim_value(state, m));
      if (best > 0 && rng.next_double() < params.greedy_capture_prob) {
        std::vector<chess::Move> captures;
        for (const auto& m : legal)
          if (detail::victim_value(state, m) == best) captures.push_back(m);
        return captures[size_t(rng.next_below(captures.size()))];
      }
      return legal[size_t(rng.next_below(legal.size()))];
    }

    case ScriptedStyle::CenterControl: {
      // Sample proportionally to a center-affinity weight of the target square.
      std::vector<double> weights(legal.size());
      for (size_t i = 0; i < legal.size(); ++i)
        weights[i] = std::exp(-params.center_gamma * detail::center_distance(legal[i].to));
      return legal[rng.pick_weighted(weights)];
    }
  }
  return legal.front();
}

// Plays `player` (scripted style) against a uniform-random opponent,
// alternating colors per game. Games cap at max_plies with result "*";
// games that end over the board carry their real result.
inline std::vector<chess::PgnGame> generate_scripted_games(const std::string& player_name,
                                                           ScriptedStyle style, int games,
                                                           int max_plies, uint64_t seed,
                                                           const StyleParams& params = {}) {
  std::vector<chess::PgnGame> corpus;
  corpus.reserve(size_t(games));
  for (int g = 0; g < games; ++g) {
    Rng rng(derive_seed(seed, player_name + "/game-" + std::to_string(g)));
    chess::PgnGame game;
    const bool plays_white = g % 2 == 0;
    game.white = plays_white ? player_name : "opponent";
    game.black = plays_white ? "opponent" : player_name;
    game.result = "*";

    chess::BoardState state = chess::start_position();
    std::map<uint64_t, int> repetitions;
    repetitions[chess::zobrist_key(state)] = 1;

    for (int ply = 0; ply < max_plies; ++ply) {
      const auto legal = chess::legal_moves(state);
      if (legal.empty()) {
        if (chess::in_check(state))
          game.result = state.side_to_move == chess::Color::White ? "0-1" : "1-0";
        else
          game.result = "1/2-1/2";
        break;
      }
      if (state.halfmove_clock >= 100) {
        game.result = "1/2-1/2";
        break;
      }
      const bool players_turn =
          (state.side_to_move == chess::Color::White) == plays_white;
      const chess::Move m = players_turn
                                ? scripted_move(style, state, legal, rng, params)
                                : legal[size_t(rng.next_below(legal.size()))];
      game.moves.push_back(m);
      state = chess::apply_move_unchecked(state, m);
      if (++repetitions[chess::zobrist_key(state)] >= 3) {
        game.result = "1/2-1/2";
        break;
      }
    }
    corpus.push_back(std::move(game));
  }
  return corpus;
}

}  // namespace stylebench::eval
