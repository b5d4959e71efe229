#include <catch2/catch.hpp>

#include <cmath>
#include <filesystem>
#include <set>

#include "stylebench/policy/eval.hpp"
#include "stylebench/policy/model.hpp"
#include "stylebench/policy/store.hpp"

using namespace stylebench;
using namespace stylebench::chess;
using namespace stylebench::dataset;
using namespace stylebench::policy;

namespace {

// Scripted corpus: `target` plays the move at the given rank of the legal
// list (0 = lowest label, SIZE_MAX = highest); the opponent plays uniformly
// at random. Target alternates colors per game.
std::vector<PgnGame> scripted_corpus(const std::string& target, size_t move_rank,
                                     int games, int max_plies, uint64_t seed) {
  std::vector<PgnGame> corpus;
  Rng rng(seed);
  for (int g = 0; g < games; ++g) {
    PgnGame game;
    const bool target_white = g % 2 == 0;
    game.white = target_white ? target : "opponent";
    game.black = target_white ? "opponent" : target;
    BoardState s = start_position();
    for (int ply = 0; ply < max_plies; ++ply) {
      const auto legal = legal_moves(s);
      if (legal.empty() || s.halfmove_clock >= 100) break;
      const bool targets_turn = (s.side_to_move == Color::White) == target_white;
      Move m;
      if (targets_turn)
        m = legal[std::min(move_rank, legal.size() - 1)];
      else
        m = legal[size_t(rng.next_below(legal.size()))];
      game.moves.push_back(m);
      s = apply_move_unchecked(s, m);
    }
    game.result = "1/2-1/2";
    corpus.push_back(std::move(game));
  }
  return corpus;
}

}  // namespace

TEST_CASE("predict: all-zero weights give a uniform policy and zero value") {
  PolicyModel model;  // zero-initialized weights
  Prediction pred = predict(model, model.generic_embedding, start_position());
  REQUIRE(pred.moves.size() == 20);
  for (double p : pred.probs) CHECK(p == Approx(0.05).margin(1e-12));
  CHECK(pred.value == Approx(0.0).margin(1e-12));
}

TEST_CASE("predict: probabilities sum to one over exactly the legal moves") {
  PolicyModel model;
  model.init(41);
  Rng rng(4141);
  BoardState s = start_position();
  for (int ply = 0; ply < 250; ++ply) {
    const auto legal = legal_moves(s);
    if (legal.empty() || s.halfmove_clock >= 100) {
      s = start_position();
      continue;
    }
    Prediction pred = predict(model, model.generic_embedding, s);
    CHECK(pred.moves == legal);  // support is exactly the legal set
    double sum = 0.0;
    for (double p : pred.probs) sum += p;
    CHECK(sum == Approx(1.0).margin(1e-9));
    CHECK(pred.value >= -1.0);
    CHECK(pred.value <= 1.0);
    s = apply_move_unchecked(s, legal[size_t(rng.next_below(legal.size()))]);
  }
}

TEST_CASE("predict: terminal state is an error") {
  PolicyModel model;
  BoardState mate = parse_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3");
  CHECK_THROWS_AS(predict(model, model.generic_embedding, mate), DataError);
}

TEST_CASE("pretrain: a singleton dataset is memorized") {
  PgnGame game;
  game.white = "memo";
  game.black = "other";
  game.result = "1-0";
  game.moves.push_back(parse_uci("e2e4"));
  auto pairs = extract_pairs(game, "memo", 0);
  REQUIRE(pairs.size() == 1);

  TrainConfig config;
  config.epochs = 60;
  config.lr = 1e-2;
  config.batch = 1;
  config.seed = 7;
  auto result = pretrain_backbone(pairs, config);
  Prediction pred = predict(result.model, result.model.generic_embedding, pairs[0].state);
  CHECK(to_uci(pred.moves[pred.argmax()]) == "e2e4");
  CHECK(result.epoch_losses.back() < result.epoch_losses.front());
}

TEST_CASE("pretrain: empty dataset is an error") {
  std::vector<StateActionPair> empty;
  CHECK_THROWS_AS(pretrain_backbone(empty, TrainConfig{}), DataError);
}

TEST_CASE("pretrain: same seed, config, and data give identical weight bytes") {
  auto corpus = scripted_corpus("p", 0, 6, 16, 3);
  std::vector<StateActionPair> pairs;
  for (uint32_t i = 0; i < corpus.size(); ++i) {
    auto ps = extract_pairs(corpus[i], "p", i);
    pairs.insert(pairs.end(), ps.begin(), ps.end());
  }
  TrainConfig config;
  config.epochs = 2;
  config.batch = 64;
  config.seed = 11;

  const std::string path_a = "/tmp/stylebench_policy_a.sbw";
  const std::string path_b = "/tmp/stylebench_policy_b.sbw";
  save_model(path_a, ModelBundle{pretrain_backbone(pairs, config).model, {}});
  save_model(path_b, ModelBundle{pretrain_backbone(pairs, config).model, {}});
  CHECK(read_text_file(path_a) == read_text_file(path_b));
}

namespace {

struct TwoStyleFixture {
  PlayerDataset low;
  PlayerDataset high;
  PretrainResult pretrained;
};

// Pretraining is the expensive part; share one fixture across sections.
const TwoStyleFixture& two_style_fixture() {
  static const TwoStyleFixture fixture = [] {
    TwoStyleFixture f;
    const int kGames = 30;
    const int kPlies = 24;
    auto corpus_low = scripted_corpus("low", 0, kGames, kPlies, 21);
    auto corpus_high = scripted_corpus("high", SIZE_MAX, kGames, kPlies, 22);
    f.low = build_player_dataset(corpus_low, "low", 0.8, 5);
    f.high = build_player_dataset(corpus_high, "high", 0.8, 5);

    std::vector<StateActionPair> pooled = f.low.train;
    pooled.insert(pooled.end(), f.high.train.begin(), f.high.train.end());

    TrainConfig pre;
    pre.epochs = 10;
    pre.lr = 1e-3;
    pre.batch = 128;
    pre.seed = 17;
    f.pretrained = pretrain_backbone(pooled, pre);
    return f;
  }();
  return fixture;
}

}  // namespace

TEST_CASE("pretraining on a single scripted style reaches 90% held-out argmax") {
  // One player that always picks the lexicographically-first legal move.
  auto corpus = scripted_corpus("first", 0, 30, 24, 51);
  PlayerDataset ds = build_player_dataset(corpus, "first", 0.8, 9);
  TrainConfig pre;
  pre.epochs = 15;
  pre.lr = 1e-3;
  pre.batch = 128;
  pre.seed = 29;
  auto trained = pretrain_backbone(ds.train, pre);
  int match = 0;
  for (const auto& p : ds.test) {
    Prediction pred = predict(trained.model, trained.model.generic_embedding, p.state);
    if (pred.moves[pred.argmax()] == legal_moves(p.state).front()) ++match;
  }
  INFO("matched " << match << " of " << ds.test.size());
  CHECK(double(match) >= 0.9 * double(ds.test.size()));
}

TEST_CASE("scripted-policy end to end: fine-tuning specializes the embedding") {
  const TwoStyleFixture& fixture = two_style_fixture();
  const PlayerDataset& low = fixture.low;
  const PlayerDataset& high = fixture.high;
  const PolicyModel& model = fixture.pretrained.model;

  SECTION("pretraining reduces the training loss") {
    CHECK(fixture.pretrained.epoch_losses.back() < fixture.pretrained.epoch_losses.front());
  }

  TrainConfig ft;
  ft.epochs = 20;
  ft.lr = 1e-2;
  ft.batch = 128;
  ft.seed = 23;
  ft.freeze_backbone = true;

  SECTION("freeze contract and embedding specialization") {
    const uint64_t checksum_before = model.frozen_checksum();
    auto ft_low = finetune_embedding(model, "low", low.train, ft);
    auto ft_high = finetune_embedding(model, "high", high.train, ft);
    CHECK(model.frozen_checksum() == checksum_before);
    CHECK(ft_low.embedding.provenance == PlayerEmbedding::Provenance::FineTuned);

    // Exactly the 64 embedding values may differ.
    auto before = model.flat_parameters(model.generic_embedding);
    auto after = model.flat_parameters(ft_low.embedding.values);
    REQUIRE(before.size() == after.size());
    size_t diffs = 0;
    for (size_t i = 0; i < before.size(); ++i)
      if (before[i] != after[i]) ++diffs;
    CHECK(diffs <= policy::kEmbedDim);
    CHECK(diffs > 0);

    // Specialized embeddings beat the generic one on their own style.
    const double generic_ce = held_out_cross_entropy(model, model.generic_embedding, low.test);
    const double tuned_ce = held_out_cross_entropy(model, ft_low.embedding.values, low.test);
    CHECK(tuned_ce < generic_ce);

    const double generic_ce_h = held_out_cross_entropy(model, model.generic_embedding, high.test);
    const double tuned_ce_h = held_out_cross_entropy(model, ft_high.embedding.values, high.test);
    CHECK(tuned_ce_h < generic_ce_h);

    // Embedding sensitivity: opposite styles disagree somewhere on a probe set.
    double l2 = 0.0;
    for (size_t i = 0; i < kEmbedDim; ++i) {
      const double d = ft_low.embedding.values[i] - ft_high.embedding.values[i];
      l2 += d * d;
    }
    INFO("embedding distance " << std::sqrt(l2));
    CHECK(std::sqrt(l2) >= 1.0);
    int disagreements = 0;
    for (const auto* split : {&low.test, &high.test}) {
      for (const auto& p : *split) {
        Prediction a = predict(model, ft_low.embedding.values, p.state);
        Prediction b = predict(model, ft_high.embedding.values, p.state);
        if (!(a.moves[a.argmax()] == b.moves[b.argmax()])) ++disagreements;
      }
    }
    CHECK(disagreements >= 1);
  }

  SECTION("zero-epoch fine-tuning returns the generic embedding exactly") {
    TrainConfig none = ft;
    none.epochs = 0;
    auto result = finetune_embedding(model, "low", low.train, none);
    CHECK(result.embedding.values == model.generic_embedding);
    CHECK(result.embedding.provenance == PlayerEmbedding::Provenance::GenericCopy);
  }

  SECTION("fine-tuning an empty dataset is an error") {
    std::vector<StateActionPair> empty;
    CHECK_THROWS_AS(finetune_embedding(model, "low", empty, ft), DataError);
  }

  SECTION("model bundle round trip preserves weights and embeddings") {
    auto ft_low = finetune_embedding(model, "low", low.train, ft);
    ModelBundle bundle{model, {{"low", ft_low.embedding}}};
    const std::string path = "/tmp/stylebench_bundle.sbw";
    save_model(path, bundle);
    ModelBundle loaded = load_model(path);
    // f32 serialization: weights match to float precision.
    Prediction a = predict(model, ft_low.embedding.values, low.test[0].state);
    Prediction b = predict(loaded.model, loaded.embedding_for("low"), low.test[0].state);
    REQUIRE(a.probs.size() == b.probs.size());
    for (size_t i = 0; i < a.probs.size(); ++i)
      CHECK(a.probs[i] == Approx(b.probs[i]).margin(1e-4));
    CHECK(loaded.players.count("low") == 1);
  }
}

TEST_CASE("move_accuracy: counting and bootstrap") {
  // A stub-friendly check: accuracy over 4 pairs where the model matches 3.
  auto corpus = scripted_corpus("p", 0, 2, 8, 31);
  std::vector<StateActionPair> pairs;
  for (uint32_t i = 0; i < corpus.size(); ++i) {
    auto ps = extract_pairs(corpus[i], "p", i);
    pairs.insert(pairs.end(), ps.begin(), ps.end());
  }
  REQUIRE(pairs.size() >= 4);
  pairs.resize(4);

  // Zero model predicts uniformly; argmax tie-breaks to the lowest label,
  // which is exactly the scripted player's move, so accuracy is 1.0...
  PolicyModel model;
  mcts::SearchConfig search;
  auto perfect = move_accuracy(model, model.generic_embedding, pairs,
                               MoveSelector::ArgmaxPolicy, search, 1);
  CHECK(perfect.accuracy == Approx(1.0));

  // ...and corrupting one recorded move makes it 3/4.
  auto corrupted = pairs;
  const auto legal = legal_moves(corrupted[1].state);
  corrupted[1].played = legal.back();
  auto three_of_four = move_accuracy(model, model.generic_embedding, corrupted,
                                     MoveSelector::ArgmaxPolicy, search, 1);
  CHECK(three_of_four.accuracy == Approx(0.75));
  CHECK(three_of_four.stddev > 0.0);
  CHECK(three_of_four.stddev < 0.5);

  std::vector<StateActionPair> empty;
  CHECK_THROWS_AS(
      move_accuracy(model, model.generic_embedding, empty, MoveSelector::ArgmaxPolicy, search, 1),
      DataError);
}

TEST_CASE("move_accuracy: mcts selector runs and stays in range") {
  auto corpus = scripted_corpus("p", 0, 2, 10, 37);
  std::vector<StateActionPair> pairs;
  for (uint32_t i = 0; i < corpus.size(); ++i) {
    auto ps = extract_pairs(corpus[i], "p", i);
    pairs.insert(pairs.end(), ps.begin(), ps.end());
  }
  pairs.resize(6);
  PolicyModel model;
  model.init(3);
  mcts::SearchConfig search;
  search.simulations = 40;
  auto result = move_accuracy(model, model.generic_embedding, pairs,
                              MoveSelector::MctsMostVisited, search, 2);
  CHECK(result.accuracy >= 0.0);
  CHECK(result.accuracy <= 1.0);
}
