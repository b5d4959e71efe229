#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stylebench/chess/encode.hpp"
#include "stylebench/chess/pgn.hpp"
#include "stylebench/dataset/labels.hpp"
#include "stylebench/util/rng.hpp"

namespace stylebench::dataset {

struct StateActionPair {
  chess::EncodedPosition position;
  chess::BoardState state;   // retained for legality masking and transitions
  chess::Move played;
  std::string player_id;
  uint32_t game_id = 0;
  uint16_t ply = 0;          // 0-based ply index within the game
  double outcome = 0.0;      // final result from the mover's perspective: +1/-1/0
};

// Result header is authoritative for labeling; unknown results count as 0.
inline double outcome_for_mover(const std::string& result, chess::Color mover) {
  double white_score = 0.0;
  if (result == "1-0") white_score = 1.0;
  else if (result == "0-1") white_score = -1.0;
  else white_score = 0.0;  // "1/2-1/2", "*", anything else
  return mover == chess::Color::White ? white_score : -white_score;
}

// One pair per ply where `target` is to move, in ply order. The opponent's
// moves only advance the state.
inline std::vector<StateActionPair> extract_pairs(const chess::PgnGame& game,
                                                  const std::string& target,
                                                  uint32_t game_id = 0) {
  const bool plays_white = game.white == target;
  const bool plays_black = game.black == target;
  if (!plays_white && !plays_black)
    throw DataError("player '" + target + "' not in game headers (" + game.white + " vs " +
                    game.black + ")");
  std::vector<StateActionPair> pairs;
  chess::BoardState state = game.initial_state();
  for (size_t ply = 0; ply < game.moves.size(); ++ply) {
    const bool target_to_move = state.side_to_move == chess::Color::White ? plays_white
                                                                          : plays_black;
    if (target_to_move) {
      StateActionPair p;
      p.position = chess::encode_position(state);
      p.state = state;
      p.played = game.moves[ply];
      p.player_id = target;
      p.game_id = game_id;
      p.ply = uint16_t(ply);
      p.outcome = outcome_for_mover(game.result, state.side_to_move);
      pairs.push_back(std::move(p));
    }
    state = chess::apply_move_unchecked(state, game.moves[ply]);
  }
  return pairs;
}

// Deterministic shuffle under seed; first ceil(ratio*n) games train, rest test.
template <class T>
inline std::pair<std::vector<T>, std::vector<T>> split_games(const std::vector<T>& games,
                                                             double ratio, uint64_t seed) {
  if (games.empty()) throw DataError("split_games: empty game list");
  if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split_games: ratio must be in (0,1)");
  std::vector<size_t> order(games.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  const size_t train_count = size_t(std::ceil(ratio * double(games.size())));
  std::pair<std::vector<T>, std::vector<T>> out;
  for (size_t i = 0; i < order.size(); ++i)
    (i < train_count ? out.first : out.second).push_back(games[order[i]]);
  return out;
}

struct PlayerDataset {
  std::string player_id;
  std::vector<StateActionPair> train;
  std::vector<StateActionPair> test;
  size_t train_games = 0;
  size_t test_games = 0;
};

// Filters the corpus to games involving `player`, splits by game, extracts
// pairs in game-index-then-ply order. game_id is the index into the corpus.
inline PlayerDataset build_player_dataset(const std::vector<chess::PgnGame>& corpus,
                                          const std::string& player, double train_ratio,
                                          uint64_t seed) {
  std::vector<uint32_t> ids;
  for (uint32_t i = 0; i < corpus.size(); ++i)
    if (corpus[i].white == player || corpus[i].black == player) ids.push_back(i);
  if (ids.empty()) throw DataError("no games found for player '" + player + "'");

  auto [train_ids, test_ids] = split_games(ids, train_ratio, seed);
  std::sort(train_ids.begin(), train_ids.end());
  std::sort(test_ids.begin(), test_ids.end());

  PlayerDataset ds;
  ds.player_id = player;
  ds.train_games = train_ids.size();
  ds.test_games = test_ids.size();
  for (uint32_t id : train_ids) {
    auto pairs = extract_pairs(corpus[id], player, id);
    ds.train.insert(ds.train.end(), pairs.begin(), pairs.end());
  }
  for (uint32_t id : test_ids) {
    auto pairs = extract_pairs(corpus[id], player, id);
    ds.test.insert(ds.test.end(), pairs.begin(), pairs.end());
  }
  return ds;
}

}  // namespace stylebench::dataset
