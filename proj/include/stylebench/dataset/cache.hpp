#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylebench/chess/movegen.hpp"
#include "stylebench/dataset/pairs.hpp"
#include "stylebench/util/binio.hpp"

namespace stylebench::dataset {

// Cache file: magic "SBD1", format version u32, player name (length-prefixed
// UTF-8), pair count u32, then per pair: game id u32, ply u16, FEN
// (length-prefixed), move label u16. Little-endian throughout.
constexpr uint32_t kCacheFormatVersion = 1;

inline void write_pair_cache(const std::string& path, const std::string& player,
                             const std::vector<StateActionPair>& pairs) {
  BinWriter w;
  w.raw("SBD1", 4);
  w.u32(kCacheFormatVersion);
  w.str(player);
  w.u32(uint32_t(pairs.size()));
  for (const StateActionPair& p : pairs) {
    w.u32(p.game_id);
    w.u16(p.ply);
    w.str(chess::to_fen(p.state));
    w.u16(move_label(p.played));
  }
  w.write_file(path);
}

struct PairCache {
  std::string player;
  std::vector<StateActionPair> pairs;  // outcome left at 0; see meta sidecar
};

inline PairCache read_pair_cache(const std::string& path) {
  BinReader r = BinReader::from_file(path);
  char magic[4];
  for (char& c : magic) c = char(r.u8());
  if (std::string_view(magic, 4) != "SBD1") throw DataError("not a dataset cache: " + path);
  const uint32_t version = r.u32();
  if (version != kCacheFormatVersion)
    throw DataError("unsupported cache version " + std::to_string(version));
  PairCache cache;
  cache.player = r.str();
  const uint32_t count = r.u32();
  cache.pairs.resize(count);
  for (StateActionPair& p : cache.pairs) {
    p.game_id = r.u32();
    p.ply = r.u16();
    p.state = chess::parse_fen(r.str());
    p.played = label_move(r.u16());
    p.position = chess::encode_position(p.state);
    p.player_id = cache.player;
  }
  return cache;
}

inline std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(uint8_t(c)) ? c : '_';
  return out;
}

// The SBD1 record has no outcome field, so per-game results (needed for the
// value target) travel in a JSON sidecar next to the cache files.
inline void write_dataset_meta(const std::string& path, const PlayerDataset& ds,
                               const std::map<uint32_t, std::string>& game_results) {
  nlohmann::json j;
  j["player"] = ds.player_id;
  j["train_games"] = ds.train_games;
  j["test_games"] = ds.test_games;
  nlohmann::json results = nlohmann::json::object();
  for (const auto& [id, result] : game_results) results[std::to_string(id)] = result;
  j["game_results"] = results;
  write_text_file(path, j.dump(2) + "\n");
}

// Writes <player>.train.sbd, <player>.test.sbd, <player>.meta.json under dir.
inline void write_player_dataset(const std::string& dir, const PlayerDataset& ds,
                                 const std::vector<chess::PgnGame>& corpus) {
  const std::string base = dir + "/" + sanitize_name(ds.player_id);
  write_pair_cache(base + ".train.sbd", ds.player_id, ds.train);
  write_pair_cache(base + ".test.sbd", ds.player_id, ds.test);
  std::map<uint32_t, std::string> results;
  for (const auto& split : {ds.train, ds.test})
    for (const StateActionPair& p : split)
      if (p.game_id < corpus.size()) results[p.game_id] = corpus[p.game_id].result;
  write_dataset_meta(base + ".meta.json", ds, results);
}

inline PlayerDataset load_player_dataset(const std::string& dir, const std::string& player) {
  const std::string base = dir + "/" + sanitize_name(player);
  PairCache train = read_pair_cache(base + ".train.sbd");
  PairCache test = read_pair_cache(base + ".test.sbd");

  PlayerDataset ds;
  ds.player_id = player;
  ds.train = std::move(train.pairs);
  ds.test = std::move(test.pairs);

  auto meta = nlohmann::json::parse(read_text_file(base + ".meta.json"));
  ds.train_games = meta.value("train_games", size_t(0));
  ds.test_games = meta.value("test_games", size_t(0));
  std::map<uint32_t, std::string> results;
  if (meta.contains("game_results"))
    for (const auto& [key, value] : meta["game_results"].items())
      results[uint32_t(std::stoul(key))] = value.get<std::string>();
  for (auto* split : {&ds.train, &ds.test}) {
    for (StateActionPair& p : *split) {
      auto it = results.find(p.game_id);
      if (it != results.end())
        p.outcome = outcome_for_mover(it->second, p.state.side_to_move);
    }
  }
  return ds;
}

}  // namespace stylebench::dataset
