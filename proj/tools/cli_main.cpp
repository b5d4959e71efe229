#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stylebench/dataset/cache.hpp"
#include "stylebench/eval/experiment.hpp"
#include "stylebench/eval/report.hpp"
#include "stylebench/eval/scripted.hpp"
#include "stylebench/policy/store.hpp"
#include "stylebench/style/autoencoder.hpp"
#include "stylebench/style/projector.hpp"

namespace fs = std::filesystem;
using namespace stylebench;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  json config = json::object();

  // data
  std::string pgn_dir;
  std::string data_dir;
  std::vector<std::string> players;
  double split_ratio = 0.8;

  // artifacts
  std::string model_path;
  std::string ae_path;
  std::string projector_path;
  std::string out;

  uint64_t seed = 0;

  // stage configs (desk-scale defaults; the paper-scale values are documented
  // in the README and config file)
  policy::TrainConfig pretrain{20, 5e-4, 256, 0, false};
  policy::TrainConfig finetune{60, 1e-2, 256, 0, true};
  style::AeConfig ae{1e-3, 10, 1024, 0};
  mcts::SearchConfig search;
  std::vector<std::string> variants = eval::kAllVariants;
  int grid = 15;
  std::string projector_method = "pca";
  size_t samples = 1;

  // synth
  int synth_games = 200;
  int synth_max_plies = 24;

  std::string fen = chess::kStartFen;
  std::vector<std::string> moves;  // UCI moves applied after the FEN
};

template <class T>
void from_config(const json& j, const char* section, const char* key, T& out) {
  if (j.contains(section) && j[section].contains(key)) out = j[section][key].get<T>();
}

void apply_config(Options& opt) {
  if (opt.config_path.empty()) return;
  opt.config = json::parse(read_text_file(opt.config_path));
  const json& j = opt.config;
  if (j.contains("seed")) opt.seed = j["seed"].get<uint64_t>();
  from_config(j, "data", "pgn_dir", opt.pgn_dir);
  from_config(j, "data", "dir", opt.data_dir);
  from_config(j, "data", "players", opt.players);
  from_config(j, "split", "ratio", opt.split_ratio);
  from_config(j, "pretrain", "epochs", opt.pretrain.epochs);
  from_config(j, "pretrain", "lr", opt.pretrain.lr);
  from_config(j, "pretrain", "batch", opt.pretrain.batch);
  from_config(j, "finetune", "epochs", opt.finetune.epochs);
  from_config(j, "finetune", "lr", opt.finetune.lr);
  from_config(j, "finetune", "batch", opt.finetune.batch);
  from_config(j, "ae", "epochs", opt.ae.epochs);
  from_config(j, "ae", "lr", opt.ae.lr);
  from_config(j, "ae", "batch", opt.ae.batch);
  from_config(j, "mcts", "simulations", opt.search.simulations);
  from_config(j, "mcts", "c", opt.search.c);
  from_config(j, "mcts", "eta", opt.search.eta);
  from_config(j, "mcts", "seed", opt.search.seed);
  from_config(j, "eval", "variants", opt.variants);
  from_config(j, "eval", "grid", opt.grid);
  from_config(j, "eval", "projector", opt.projector_method);
  from_config(j, "eval", "samples", opt.samples);
  from_config(j, "out", "dir", opt.out);
  from_config(j, "synth", "games", opt.synth_games);
  from_config(j, "synth", "max_plies", opt.synth_max_plies);
}

std::vector<chess::PgnGame> load_corpus(const std::string& pgn_dir) {
  if (!fs::is_directory(pgn_dir))
    throw MissingArtifactError("PGN directory not found: " + pgn_dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(pgn_dir))
    if (entry.path().extension() == ".pgn") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .pgn files under " + pgn_dir);

  std::vector<chess::PgnGame> corpus;
  for (const auto& file : files) {
    auto parsed = chess::parse_pgn(read_text_file(file));
    for (const auto& err : parsed.errors)
      std::cerr << "warning: " << file << ": game " << err.game_index << " ply " << err.ply
                << " token '" << err.token << "': " << err.message << " (skipped)\n";
    for (auto& g : parsed.games) corpus.push_back(std::move(g));
  }
  return corpus;
}

std::map<std::string, dataset::PlayerDataset> load_datasets(const Options& opt) {
  if (opt.players.empty()) throw UsageError("no players given (--player or config data.players)");
  if (opt.data_dir.empty()) throw UsageError("no dataset directory given (--data)");
  std::map<std::string, dataset::PlayerDataset> out;
  for (const auto& p : opt.players) out[p] = dataset::load_player_dataset(opt.data_dir, p);
  return out;
}

std::vector<dataset::StateActionPair> pooled_train(
    const std::map<std::string, dataset::PlayerDataset>& datasets) {
  std::vector<dataset::StateActionPair> pooled;
  for (const auto& [_, ds] : datasets)
    pooled.insert(pooled.end(), ds.train.begin(), ds.train.end());
  return pooled;
}

void require_out_dir(const std::string& out) {
  if (out.empty()) throw UsageError("no output location given (--out)");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw DataError("cannot create output directory " + out + ": " + ec.message());
}

int cmd_synth(const Options& opt) {
  require_out_dir(opt.out);
  const std::pair<const char*, eval::ScriptedStyle> styles[] = {
      {"uniform", eval::ScriptedStyle::UniformRandom},
      {"greedy", eval::ScriptedStyle::MaterialGreedy},
      {"center", eval::ScriptedStyle::CenterControl}};
  for (const auto& [name, style] : styles) {
    auto games = eval::generate_scripted_games(name, style, opt.synth_games, opt.synth_max_plies,
                                               derive_seed(opt.seed, std::string("synth/") + name));
    std::string text;
    for (const auto& g : games) text += chess::write_pgn(g);
    write_text_file(opt.out + "/" + std::string(name) + ".pgn", text);
    std::cout << name << ": " << games.size() << " games -> " << opt.out << "/" << name
              << ".pgn\n";
  }
  return 0;
}

int cmd_ingest(const Options& opt) {
  if (opt.pgn_dir.empty()) throw UsageError("ingest needs --pgn-dir");
  if (opt.players.empty()) throw UsageError("ingest needs at least one --player");
  require_out_dir(opt.out);
  auto corpus = load_corpus(opt.pgn_dir);
  const uint64_t split_seed = derive_seed(opt.seed, "split");
  for (const auto& player : opt.players) {
    auto ds = dataset::build_player_dataset(corpus, player, opt.split_ratio, split_seed);
    dataset::write_player_dataset(opt.out, ds, corpus);
    std::cout << player << ": " << ds.train_games << " train games (" << ds.train.size()
              << " pairs), " << ds.test_games << " test games (" << ds.test.size()
              << " pairs)\n";
  }
  return 0;
}

int cmd_pretrain(const Options& opt) {
  if (opt.out.empty()) throw UsageError("pretrain needs --out");
  auto datasets = load_datasets(opt);
  auto pooled = pooled_train(datasets);
  policy::TrainConfig config = opt.pretrain;
  config.seed = derive_seed(opt.seed, "pretrain");
  auto result = policy::pretrain_backbone(pooled, config);
  for (size_t e = 0; e < result.epoch_losses.size(); ++e)
    std::cout << "epoch " << e + 1 << ": loss " << result.epoch_losses[e] << "\n";
  policy::save_model(opt.out, policy::ModelBundle{std::move(result.model), {}});
  std::cout << "model -> " << opt.out << "\n";
  return 0;
}

int cmd_finetune(const Options& opt) {
  if (opt.model_path.empty()) throw UsageError("finetune needs --model");
  if (opt.out.empty()) throw UsageError("finetune needs --out");
  auto datasets = load_datasets(opt);
  policy::ModelBundle bundle = policy::load_model(opt.model_path);
  for (const auto& player : opt.players) {
    policy::TrainConfig config = opt.finetune;
    config.freeze_backbone = true;
    config.seed = derive_seed(opt.seed, "finetune/" + player);
    auto result = policy::finetune_embedding(bundle.model, player, datasets.at(player).train,
                                             config);
    bundle.players[player] = std::move(result.embedding);
    std::cout << player << ": fine-tuned (" << result.epoch_losses.size() << " epochs, final "
              << (result.epoch_losses.empty() ? 0.0 : result.epoch_losses.back()) << ")\n";
  }
  policy::save_model(opt.out, bundle);
  std::cout << "model -> " << opt.out << "\n";
  return 0;
}

int cmd_search(const Options& opt) {
  if (opt.model_path.empty()) throw UsageError("search needs --model");
  policy::ModelBundle bundle = policy::load_model(opt.model_path);
  chess::BoardState state = chess::parse_fen(opt.fen);
  for (const auto& uci : opt.moves)
    state = chess::apply_move(state, chess::parse_uci(uci));  // validates legality
  const std::string player = opt.players.empty() ? "" : opt.players.front();
  const std::span<const double> embedding =
      player.empty() ? std::span<const double>(bundle.model.generic_embedding)
                     : bundle.embedding_for(player);
  auto stats =
      mcts::run_search(state, policy::make_evaluator(bundle.model, embedding), opt.search);
  std::cout << "move visits prior q\n";
  for (const auto& s : stats)
    std::cout << chess::to_uci(s.move) << " " << s.visits << " " << s.prior << " " << s.q
              << "\n";
  std::cout << "selected: " << chess::to_uci(mcts::select_most_visited(stats)) << "\n";
  return 0;
}

int cmd_train_ae(const Options& opt) {
  if (opt.out.empty()) throw UsageError("train-ae needs --out");
  auto datasets = load_datasets(opt);
  std::vector<style::TransitionVector> transitions;
  for (const auto& [_, ds] : datasets)
    for (const auto& p : ds.train)
      transitions.push_back(style::transition_vector(p.state, p.played));
  style::AeConfig config = opt.ae;
  config.seed = derive_seed(opt.seed, "ae");
  auto result = style::train_autoencoder(transitions, config);
  for (size_t e = 0; e < result.epoch_mse.size(); ++e)
    std::cout << "epoch " << e + 1 << ": mse " << result.epoch_mse[e] << "\n";
  style::save_autoencoder(opt.out, result.ae);
  std::cout << "autoencoder -> " << opt.out << "\n";
  return 0;
}

int cmd_fit_projector(const Options& opt) {
  if (opt.ae_path.empty()) throw UsageError("fit-projector needs --ae");
  if (opt.out.empty()) throw UsageError("fit-projector needs --out");
  if (opt.projector_method != "pca")
    throw UsageError("unknown projector method '" + opt.projector_method + "'");
  auto datasets = load_datasets(opt);
  style::AutoEncoder ae = style::load_autoencoder(opt.ae_path);
  std::vector<style::TransitionVector> transitions;
  for (const auto& [_, ds] : datasets)
    for (const auto& p : ds.train)
      transitions.push_back(style::transition_vector(p.state, p.played));
  std::vector<const style::TransitionVector*> refs(transitions.size());
  for (size_t i = 0; i < transitions.size(); ++i) refs[i] = &transitions[i];
  nn::Matrix latents = style::encode_latents(ae, refs);
  style::Projector proj = style::fit_projector(latents);
  style::save_projector(opt.out, proj);
  std::cout << "projector (" << proj.method << ") -> " << opt.out << "\n";
  return 0;
}

eval::ExperimentConfig experiment_config(const Options& opt) {
  eval::ExperimentConfig config;
  config.players = opt.players;
  config.variants = opt.variants;
  config.grid = opt.grid;
  config.projector_method = opt.projector_method;
  config.samples = opt.samples;
  config.search = opt.search;
  config.root_seed = opt.seed;
  config.pretrain = opt.pretrain;
  config.finetune = opt.finetune;
  config.ae = opt.ae;
  return config;
}

void pool_bounds(eval::StyleSpace& space, bool& first, eval::Points pts,
                 const std::string& key) {
  const style::Bounds b = style::bounds_of(pts);
  if (first) {
    space.bounds = b;
    first = false;
  } else {
    space.bounds.xmin = std::min(space.bounds.xmin, b.xmin);
    space.bounds.xmax = std::max(space.bounds.xmax, b.xmax);
    space.bounds.ymin = std::min(space.bounds.ymin, b.ymin);
    space.bounds.ymax = std::max(space.bounds.ymax, b.ymax);
  }
  space.distributions[key] = std::move(pts);
}

eval::Points project_transitions(const eval::StyleSpace& space,
                                 const std::vector<style::TransitionVector>& trs) {
  eval::Points pts(trs.size());
  parallel_for(trs.size(), [&](size_t i) {
    pts[i] = style::project_2d(space.projector, style::encode_latent(space.ae, trs[i]));
  });
  return pts;
}

std::vector<style::TransitionVector> pair_transitions(
    const std::vector<dataset::StateActionPair>& pairs) {
  std::vector<style::TransitionVector> trs(pairs.size());
  parallel_for(pairs.size(), [&](size_t i) {
    trs[i] = style::transition_vector(pairs[i].state, pairs[i].played);
  });
  return trs;
}

int cmd_eval_accuracy(const Options& opt) {
  if (opt.model_path.empty()) throw UsageError("eval-accuracy needs --model");
  auto datasets = load_datasets(opt);
  policy::ModelBundle bundle = policy::load_model(opt.model_path);
  for (const auto& v : opt.variants)
    if (v != "base")
      for (const auto& p : opt.players)
        if (!bundle.players.count(p))
          throw MissingArtifactError("model file " + opt.model_path +
                                     " has no fine-tuned embedding for player '" + p + "'");
  auto choices = eval::choose_moves(bundle, datasets, opt.variants, opt.search, 1, opt.seed);
  auto table = eval::accuracy_from_choices(datasets, opt.players, opt.variants, choices,
                                           opt.seed);
  const std::string csv = eval::accuracy_csv(table);
  std::cout << csv;
  if (!opt.out.empty()) {
    require_out_dir(opt.out);
    write_text_file(opt.out + "/accuracy.csv", csv);
    write_text_file(opt.out + "/accuracy.json", eval::accuracy_json(table).dump(2) + "\n");
  }
  return 0;
}

int cmd_jsd_matrix(const Options& opt) {
  if (opt.ae_path.empty() || opt.projector_path.empty())
    throw UsageError("jsd-matrix needs --ae and --proj");
  require_out_dir(opt.out);
  auto datasets = load_datasets(opt);

  eval::StyleSpace space;
  space.grid = opt.grid;
  space.ae = style::load_autoencoder(opt.ae_path);
  space.projector = style::load_projector(opt.projector_path);
  bool first = true;
  for (const auto& p : opt.players) {
    const auto& ds = datasets.at(p);
    if (ds.train.empty() || ds.test.empty())
      throw DataError("empty train or test transitions for " + p);
    pool_bounds(space, first, project_transitions(space, pair_transitions(ds.train)),
                "train/" + p);
    pool_bounds(space, first, project_transitions(space, pair_transitions(ds.test)),
                "test/" + p);
  }
  auto matrix = eval::matrix_from_space(space, opt.players);
  std::cout << eval::matrix_csv(matrix);
  write_text_file(opt.out + "/jsd_matrix.csv", eval::matrix_csv(matrix));
  write_text_file(opt.out + "/jsd_matrix.json", eval::matrix_json(matrix).dump(2) + "\n");
  write_text_file(opt.out + "/jsd_matrix.pgm", eval::matrix_pgm(matrix));
  write_text_file(opt.out + "/jsd_matrix.svg", eval::matrix_svg(matrix));
  return 0;
}

int cmd_align(const Options& opt) {
  if (opt.model_path.empty() || opt.ae_path.empty() || opt.projector_path.empty())
    throw UsageError("align needs --model, --ae, and --proj");
  require_out_dir(opt.out);
  auto datasets = load_datasets(opt);
  policy::ModelBundle bundle = policy::load_model(opt.model_path);
  for (const auto& v : opt.variants)
    if (v != "base")
      for (const auto& p : opt.players)
        if (!bundle.players.count(p))
          throw MissingArtifactError("model file " + opt.model_path +
                                     " has no fine-tuned embedding for player '" + p + "'");
  auto choices =
      eval::choose_moves(bundle, datasets, opt.variants, opt.search, opt.samples, opt.seed);

  eval::StyleSpace space;
  space.grid = opt.grid;
  space.ae = style::load_autoencoder(opt.ae_path);
  space.projector = style::load_projector(opt.projector_path);
  bool first = true;
  for (const auto& p : opt.players) {
    const auto& ds = datasets.at(p);
    if (ds.train.empty() || ds.test.empty())
      throw DataError("empty train or test transitions for " + p);
    pool_bounds(space, first, project_transitions(space, pair_transitions(ds.train)),
                "train/" + p);
    pool_bounds(space, first, project_transitions(space, pair_transitions(ds.test)),
                "test/" + p);
    const auto& sampled = choices.sampled.at(p);
    for (size_t v = 0; v < opt.variants.size(); ++v) {
      std::vector<style::TransitionVector> trs(sampled[v].size());
      for (size_t i = 0; i < ds.test.size(); ++i)
        for (size_t s = 0; s < opt.samples; ++s)
          trs[i * opt.samples + s] =
              style::transition_vector(ds.test[i].state, sampled[v][i * opt.samples + s]);
      pool_bounds(space, first, project_transitions(space, trs),
                  "model/" + opt.variants[v] + "/" + p);
    }
  }
  auto table = eval::alignment_from_space(space, opt.players, opt.variants, opt.seed);
  std::cout << eval::alignment_csv(table);
  write_text_file(opt.out + "/alignment.csv", eval::alignment_csv(table));
  write_text_file(opt.out + "/alignment.json", eval::alignment_json(table).dump(2) + "\n");
  return 0;
}

int cmd_report(const Options& opt) {
  require_out_dir(opt.out);
  const auto t_start = std::chrono::steady_clock::now();
  std::map<std::string, double> wall;
  auto last = t_start;
  auto lap = [&](const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    wall[name] = std::chrono::duration<double>(now - last).count();
    last = now;
  };

  auto datasets = load_datasets(opt);
  eval::ExperimentConfig config = experiment_config(opt);
  config.validate();
  lap("load_datasets");

  policy::ModelBundle bundle;
  if (!opt.model_path.empty()) {
    bundle = policy::load_model(opt.model_path);
  } else {
    policy::TrainConfig pre = config.pretrain;
    pre.seed = derive_seed(config.root_seed, "pretrain");
    bundle.model = policy::pretrain_backbone(pooled_train(datasets), pre).model;
  }
  lap("pretrain");

  eval::ExperimentResult result = eval::run_experiment(config, bundle, datasets);
  lap("experiment");

  auto entries = eval::emit_report(result, opt.out);
  policy::save_model(opt.out + "/model.sbw", bundle);
  {
    const std::string bytes = read_text_file(opt.out + "/model.sbw");
    entries.push_back({opt.out + "/model.sbw", fnv1a64_bytes(bytes.data(), bytes.size())});
  }
  result.seeds["pretrain"] = derive_seed(config.root_seed, "pretrain");
  result.seeds["split"] = derive_seed(config.root_seed, "split");
  lap("emit");
  wall["total"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  json config_echo = opt.config;
  config_echo["players"] = opt.players;
  config_echo["resolved"] = {{"grid", config.grid},
                             {"projector", config.projector_method},
                             {"variants", config.variants},
                             {"samples", config.samples},
                             {"mcts",
                              {{"simulations", config.search.simulations},
                               {"c", config.search.c},
                               {"eta", config.search.eta},
                               {"seed", config.search.seed}}}};
  eval::write_manifest(opt.out + "/manifest.json", config_echo, result.seeds, entries, wall);
  std::cout << eval::accuracy_csv(result.accuracy) << "\n"
            << eval::matrix_csv(result.matrix) << "\n"
            << eval::alignment_csv(result.alignment);
  std::cout << "report -> " << opt.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylebench: player-conditioned chess policies and JSD style evaluation"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config appear after the subcommand

  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file; flags override its values");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "root seed; stage seeds derive from it");
    sub->add_option("--data", opt.data_dir, "dataset cache directory");
    sub->add_option("--player", opt.players, "player name (repeatable)");
    sub->add_option("--out", opt.out, "output file or directory");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate the scripted synthetic PGN corpus");
  add_common(synth);
  synth->add_option("--games", opt.synth_games, "games per scripted player");
  synth->add_option("--max-plies", opt.synth_max_plies, "ply cap per game");

  CLI::App* ingest = app.add_subcommand("ingest", "PGN directory -> per-player dataset caches");
  add_common(ingest);
  ingest->add_option("--pgn-dir", opt.pgn_dir, "directory of .pgn files");
  ingest->add_option("--ratio", opt.split_ratio, "train fraction of games");

  CLI::App* pretrain = app.add_subcommand("pretrain", "train the shared backbone on pooled data");
  add_common(pretrain);
  pretrain->add_option("--epochs", opt.pretrain.epochs);
  pretrain->add_option("--lr", opt.pretrain.lr);
  pretrain->add_option("--batch", opt.pretrain.batch);

  CLI::App* finetune = app.add_subcommand("finetune", "fine-tune per-player embeddings");
  add_common(finetune);
  finetune->add_option("--model", opt.model_path, "pretrained model file");
  finetune->add_option("--epochs", opt.finetune.epochs);
  finetune->add_option("--lr", opt.finetune.lr);
  finetune->add_option("--batch", opt.finetune.batch);

  CLI::App* search = app.add_subcommand("search", "run PUCT search on a position");
  add_common(search);
  search->add_option("--model", opt.model_path, "model file");
  search->add_option("--fen", opt.fen, "position (default: start position)");
  search->add_option("--moves", opt.moves, "UCI moves applied after the FEN");
  search->add_option("--simulations", opt.search.simulations);
  search->add_option("--c", opt.search.c);
  search->add_option("--eta", opt.search.eta);
  search->add_option("--mcts-seed", opt.search.seed);

  CLI::App* train_ae = app.add_subcommand("train-ae", "train the transition autoencoder");
  add_common(train_ae);
  train_ae->add_option("--epochs", opt.ae.epochs);
  train_ae->add_option("--lr", opt.ae.lr);
  train_ae->add_option("--batch", opt.ae.batch);

  CLI::App* fitp = app.add_subcommand("fit-projector", "fit the 2D projector on latents");
  add_common(fitp);
  fitp->add_option("--ae", opt.ae_path, "autoencoder file");
  fitp->add_option("--projector", opt.projector_method, "projector method (pca)");

  CLI::App* evacc = app.add_subcommand("eval-accuracy", "move accuracy per player and variant");
  add_common(evacc);
  evacc->add_option("--model", opt.model_path);
  evacc->add_option("--variants", opt.variants, "base, finetuned, finetuned+mcts");
  evacc->add_option("--simulations", opt.search.simulations);
  evacc->add_option("--c", opt.search.c);
  evacc->add_option("--eta", opt.search.eta);

  CLI::App* jsdm = app.add_subcommand("jsd-matrix", "train/test divergence matrix + heatmap");
  add_common(jsdm);
  jsdm->add_option("--ae", opt.ae_path);
  jsdm->add_option("--proj", opt.projector_path);
  jsdm->add_option("--grid", opt.grid);

  CLI::App* align = app.add_subcommand("align", "stylistic alignment vs the train distribution");
  add_common(align);
  align->add_option("--model", opt.model_path);
  align->add_option("--ae", opt.ae_path);
  align->add_option("--proj", opt.projector_path);
  align->add_option("--grid", opt.grid);
  align->add_option("--variants", opt.variants);
  align->add_option("--samples", opt.samples, "sampled moves per test position");
  align->add_option("--simulations", opt.search.simulations);

  CLI::App* report = app.add_subcommand("report", "full experiment: all tables + manifest");
  add_common(report);
  report->add_option("--model", opt.model_path, "reuse a trained model (skips pretraining)");
  report->add_option("--variants", opt.variants);
  report->add_option("--grid", opt.grid);
  report->add_option("--samples", opt.samples);
  report->add_option("--simulations", opt.search.simulations);
  report->add_option("--c", opt.search.c);
  report->add_option("--eta", opt.search.eta);
  report->add_option("--pretrain-epochs", opt.pretrain.epochs);
  report->add_option("--finetune-epochs", opt.finetune.epochs);
  report->add_option("--finetune-lr", opt.finetune.lr);
  report->add_option("--ae-epochs", opt.ae.epochs);
  report->add_option("--ae-batch", opt.ae.batch);

  // Parse once to capture --config, apply the file, then reparse so explicit
  // flags win over config values.
  try {
    app.parse(argc, argv);
    if (!opt.config_path.empty()) {
      apply_config(opt);
      app.clear();
      app.parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config file: " << e.what() << "\n";
    return 2;
  } catch (const MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    if (synth->parsed()) return cmd_synth(opt);
    if (ingest->parsed()) return cmd_ingest(opt);
    if (pretrain->parsed()) return cmd_pretrain(opt);
    if (finetune->parsed()) return cmd_finetune(opt);
    if (search->parsed()) return cmd_search(opt);
    if (train_ae->parsed()) return cmd_train_ae(opt);
    if (fitp->parsed()) return cmd_fit_projector(opt);
    if (evacc->parsed()) return cmd_eval_accuracy(opt);
    if (jsdm->parsed()) return cmd_jsd_matrix(opt);
    if (align->parsed()) return cmd_align(opt);
    if (report->parsed()) return cmd_report(opt);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
