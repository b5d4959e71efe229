#include <catch2/catch.hpp>

#include <filesystem>
#include <set>
#include <sstream>

#include "stylebench/eval/experiment.hpp"
#include "stylebench/eval/report.hpp"

using namespace stylebench;
using namespace stylebench::chess;
using namespace stylebench::dataset;
using namespace stylebench::eval;

namespace {

// Small synthetic world shared by the harness tests: 3 scripted players,
// a pretrained bundle, and one full experiment run.
struct HarnessFixture {
  std::vector<std::string> players{"uniform", "greedy", "center"};
  std::map<std::string, PlayerDataset> datasets;
  policy::ModelBundle bundle;
  ExperimentConfig config;
  ExperimentResult result;
};

ExperimentConfig tiny_config(const std::vector<std::string>& players) {
  ExperimentConfig config;
  config.players = players;
  config.root_seed = 404;
  config.search.simulations = 16;
  config.pretrain.epochs = 4;
  config.pretrain.batch = 128;
  config.pretrain.lr = 1e-3;
  config.pretrain.seed = 1;
  config.finetune.epochs = 6;
  config.finetune.batch = 128;
  config.finetune.lr = 5e-3;
  config.ae.epochs = 2;
  config.ae.batch = 128;
  return config;
}

const HarnessFixture& harness_fixture() {
  static const HarnessFixture fixture = [] {
    HarnessFixture f;
    const ScriptedStyle styles[] = {ScriptedStyle::UniformRandom, ScriptedStyle::MaterialGreedy,
                                    ScriptedStyle::CenterControl};
    for (size_t i = 0; i < f.players.size(); ++i) {
      auto games = generate_scripted_games(f.players[i], styles[i], 12, 18, 1000 + i);
      f.datasets[f.players[i]] = build_player_dataset(games, f.players[i], 0.8, 7);
    }
    f.config = tiny_config(f.players);

    std::vector<StateActionPair> pooled;
    for (const auto& p : f.players) {
      const auto& ds = f.datasets.at(p);
      pooled.insert(pooled.end(), ds.train.begin(), ds.train.end());
    }
    f.bundle.model = policy::pretrain_backbone(pooled, f.config.pretrain).model;
    f.result = run_experiment(f.config, f.bundle, f.datasets);
    return f;
  }();
  return fixture;
}

}  // namespace

TEST_CASE("scripted games replay legally and stay diverse") {
  auto games = generate_scripted_games("greedy", ScriptedStyle::MaterialGreedy, 8, 24, 5);
  REQUIRE(games.size() == 8);
  std::set<std::string> move_sets;
  for (const auto& g : games) {
    BoardState s = g.initial_state();
    std::string signature;
    for (const Move& m : g.moves) {
      const auto legal = legal_moves(s);
      REQUIRE(std::binary_search(legal.begin(), legal.end(), m));
      s = apply_move_unchecked(s, m);
      signature += to_uci(m);
    }
    move_sets.insert(signature);
  }
  CHECK(move_sets.size() == games.size());  // stochastic styles, distinct games

  // Generated PGN parses back to the same moves.
  std::string text;
  for (const auto& g : games) text += write_pgn(g);
  auto parsed = parse_pgn(text);
  REQUIRE(parsed.errors.empty());
  REQUIRE(parsed.games.size() == games.size());
  for (size_t i = 0; i < games.size(); ++i) CHECK(parsed.games[i].moves == games[i].moves);
}

TEST_CASE("scripted styles are reproducible under the same seed") {
  auto a = generate_scripted_games("center", ScriptedStyle::CenterControl, 4, 20, 9);
  auto b = generate_scripted_games("center", ScriptedStyle::CenterControl, 4, 20, 9);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].moves == b[i].moves);
}

TEST_CASE("experiment: tables have the contracted shape") {
  const auto& f = harness_fixture();
  CHECK(f.result.accuracy.rows.size() == 3);
  CHECK(f.result.accuracy.variants == kAllVariants);
  CHECK(f.result.matrix.values.size() == 3);
  CHECK(f.result.alignment.rows.size() == 3);
  for (const auto& row : f.result.matrix.values) {
    REQUIRE(row.size() == 3);
    for (double v : row) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  for (const auto& row : f.result.alignment.rows)
    for (const auto& cell : row) {
      CHECK(cell.jsd >= 0.0);
      CHECK(cell.jsd <= 1.0);
    }
}

TEST_CASE("experiment: alignment Test column equals the matrix diagonal") {
  const auto& f = harness_fixture();
  for (size_t p = 0; p < f.players.size(); ++p)
    CHECK(f.result.alignment.test_column[p].jsd == f.result.matrix.values[p][p]);
}

TEST_CASE("experiment: fine-tuning left the frozen weights untouched") {
  const auto& f = harness_fixture();
  // All three players were fine-tuned inside run_experiment.
  CHECK(f.bundle.players.size() == 3);
  for (const auto& p : f.players) {
    const auto& emb = f.bundle.players.at(p);
    CHECK(emb.values.size() == policy::kEmbedDim);
    CHECK(emb.provenance == policy::PlayerEmbedding::Provenance::FineTuned);
  }
}

TEST_CASE("divergence matrix diagonal is zero when train and test coincide") {
  const auto& f = harness_fixture();
  std::map<std::string, PlayerDataset> mirrored;
  for (const auto& p : f.players) {
    PlayerDataset ds = f.datasets.at(p);
    ds.test = ds.train;
    mirrored[p] = std::move(ds);
  }
  StyleSpace space = build_style_space(mirrored, f.players, {}, nullptr, f.config);
  DivergenceMatrix m = matrix_from_space(space, f.players);
  for (size_t i = 0; i < f.players.size(); ++i) CHECK(m.values[i][i] == 0.0);
}

TEST_CASE("a model that replays the test moves matches the Test column") {
  const auto& f = harness_fixture();
  MoveChoices replay;
  for (const auto& p : f.players) {
    const auto& ds = f.datasets.at(p);
    std::vector<Move> moves(ds.test.size());
    for (size_t i = 0; i < ds.test.size(); ++i) moves[i] = ds.test[i].played;
    replay.choices[p] = {moves};
    replay.sampled[p] = {moves};
  }
  std::vector<std::string> variants{"base"};
  StyleSpace space = build_style_space(f.datasets, f.players, variants, &replay, f.config);
  AlignmentTable table = alignment_from_space(space, f.players, variants, f.config.root_seed);
  for (size_t p = 0; p < f.players.size(); ++p)
    CHECK(table.rows[p][0].jsd == table.test_column[p].jsd);
}

TEST_CASE("accuracy of a memorizer on a single-pair test set is 100%") {
  const auto& f = harness_fixture();
  std::map<std::string, PlayerDataset> singleton;
  PlayerDataset ds = f.datasets.at("uniform");
  ds.test.resize(1);
  singleton["uniform"] = ds;

  MoveChoices choices;
  choices.choices["uniform"] = {{ds.test[0].played}};
  AccuracyTable table =
      accuracy_from_choices(singleton, {"uniform"}, {"base"}, choices, 0);
  CHECK(table.rows[0][0].accuracy == 1.0);
  CHECK(table.rows[0][0].stddev == 0.0);
}

TEST_CASE("report emission: CSV shapes, PGM endpoints, SVG labels, manifest") {
  const auto& f = harness_fixture();
  const std::string dir = "/tmp/stylebench_test_report";
  std::filesystem::create_directories(dir);
  auto entries = emit_report(f.result, dir);
  CHECK(entries.size() == 10);

  // Projection dump covers every train+test pair; histogram dump is valid
  // JSON with normalized row-major bins.
  const std::string proj = read_text_file(dir + "/projections.csv");
  CHECK(proj.rfind("player,game,ply,x,y\n", 0) == 0);
  size_t pair_count = 0;
  for (const auto& [_, ds] : f.datasets) pair_count += ds.train.size() + ds.test.size();
  CHECK(size_t(std::count(proj.begin(), proj.end(), '\n')) == pair_count + 1);
  auto hists = nlohmann::json::parse(read_text_file(dir + "/histograms.json"));
  REQUIRE(hists.contains("train/greedy"));
  CHECK(hists["train/greedy"]["grid"] == 15);
  CHECK(hists["train/greedy"]["bins"].size() == 225);

  // Accuracy CSV: header + one row per player + average.
  const std::string acc = read_text_file(dir + "/accuracy.csv");
  CHECK(std::count(acc.begin(), acc.end(), '\n') == 1 + 3 + 1);
  CHECK(acc.rfind("player,base,base_std,finetuned,finetuned_std", 0) == 0);

  // Matrix CSV round-trips within formatting precision.
  const std::string csv = read_text_file(dir + "/jsd_matrix.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "train\\test,uniform,greedy,center");
  size_t i = 0;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(cell == f.players[i]);
    size_t j = 0;
    while (std::getline(cells, cell, ',')) {
      CHECK(std::abs(std::stod(cell) - f.result.matrix.values[i][j]) <= 0.0005 + 1e-12);
      ++j;
    }
    CHECK(j == 3);
    ++i;
  }
  CHECK(i == 3);

  // PGM: header, then 0 for the minimum and 255 for the maximum entry.
  const std::string pgm = read_text_file(dir + "/jsd_matrix.pgm");
  CHECK(pgm.rfind("P2\n3 3\n255\n", 0) == 0);
  CHECK(pgm.find("255") != std::string::npos);

  const std::string svg = read_text_file(dir + "/jsd_matrix.svg");
  for (const auto& p : f.players) CHECK(svg.find(p) != std::string::npos);

  write_manifest(dir + "/manifest.json", nlohmann::json{{"players", f.players}},
                 f.result.seeds, entries, {{"total", 1.25}});
  auto manifest = nlohmann::json::parse(read_text_file(dir + "/manifest.json"));
  CHECK(manifest["seeds"].contains("root"));
  CHECK(manifest["artifacts"].size() == 10);
  CHECK(manifest["config"]["players"].size() == 3);
}

TEST_CASE("experiment: reruns with the same seed produce byte-identical CSVs") {
  const auto& f = harness_fixture();

  auto run_csvs = [&] {
    policy::ModelBundle bundle;
    std::vector<StateActionPair> pooled;
    for (const auto& p : f.players) {
      const auto& ds = f.datasets.at(p);
      pooled.insert(pooled.end(), ds.train.begin(), ds.train.end());
    }
    bundle.model = policy::pretrain_backbone(pooled, f.config.pretrain).model;
    ExperimentResult result = run_experiment(f.config, bundle, f.datasets);
    return accuracy_csv(result.accuracy) + matrix_csv(result.matrix) +
           alignment_csv(result.alignment);
  };
  CHECK(run_csvs() == run_csvs());
}

TEST_CASE("projection dump CSV has the documented header") {
  const std::string csv =
      projection_csv({{"uniform", 3, 14, 0.5, -1.25}, {"greedy", 0, 2, -0.125, 3.0}});
  CHECK(csv.rfind("player,game,ply,x,y\n", 0) == 0);
  CHECK(csv.find("uniform,3,14,0.500000,-1.250000\n") != std::string::npos);
}

TEST_CASE("worker cap honors STYLEBENCH_THREADS without changing results") {
  auto compute = [] {
    std::vector<double> out(500);
    parallel_for(out.size(), [&](size_t i) { out[i] = std::sqrt(double(i)) * 3.0; });
    return out;
  };
  setenv("STYLEBENCH_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto serial = compute();
  setenv("STYLEBENCH_THREADS", "2", 1);
  const auto parallel = compute();
  unsetenv("STYLEBENCH_THREADS");
  CHECK(serial == parallel);
  CHECK(worker_count() >= 1);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig config;
  CHECK_THROWS_AS(config.validate(), DataError);  // no players
  config.players = {"a"};
  config.variants = {"nope"};
  CHECK_THROWS_AS(config.validate(), DataError);
  config.variants = {"base"};
  config.projector_method = "umap";
  CHECK_THROWS_AS(config.validate(), DataError);
}
