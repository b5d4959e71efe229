#pragma once

#include <map>
#include <string>
#include <vector>

#include "stylebench/dataset/cache.hpp"
#include "stylebench/eval/scripted.hpp"
#include "stylebench/policy/eval.hpp"
#include "stylebench/policy/store.hpp"
#include "stylebench/style/autoencoder.hpp"
#include "stylebench/style/jsd.hpp"
#include "stylebench/style/projector.hpp"
#include "stylebench/util/parallel.hpp"

namespace stylebench::eval {

inline const std::vector<std::string> kAllVariants = {"base", "finetuned", "finetuned+mcts"};

struct ExperimentConfig {
  std::vector<std::string> players;
  std::vector<std::string> variants = kAllVariants;
  int grid = 15;
  std::string projector_method = "pca";
  size_t samples = 1;               // sampled moves per test position (alignment only)
  mcts::SearchConfig search;        // mcts.simulations / mcts.c / mcts.eta / mcts.seed
  uint64_t root_seed = 0;
  policy::TrainConfig pretrain;     // used when the experiment trains from scratch
  policy::TrainConfig finetune;
  style::AeConfig ae;

  void validate() const {
    if (players.empty()) throw DataError("ExperimentConfig: at least one player required");
    if (variants.empty()) throw DataError("ExperimentConfig: at least one variant required");
    for (const auto& v : variants)
      if (v != "base" && v != "finetuned" && v != "finetuned+mcts")
        throw DataError("ExperimentConfig: unknown variant '" + v + "'");
    if (projector_method != "pca")
      throw DataError("ExperimentConfig: unknown projector '" + projector_method + "'");
    if (samples < 1) throw DataError("ExperimentConfig: samples must be >= 1");
    search.validate();
  }
};

struct AccuracyCell {
  double accuracy = 0.0;
  double stddev = 0.0;
};

struct AccuracyTable {
  std::vector<std::string> players;
  std::vector<std::string> variants;
  // rows[player_index][variant_index], plus an average row appended by emitters
  std::vector<std::vector<AccuracyCell>> rows;

  std::vector<AccuracyCell> average() const {
    std::vector<AccuracyCell> avg(variants.size());
    for (size_t v = 0; v < variants.size(); ++v) {
      for (const auto& row : rows) {
        avg[v].accuracy += row[v].accuracy;
        avg[v].stddev += row[v].stddev;
      }
      avg[v].accuracy /= double(rows.size());
      avg[v].stddev /= double(rows.size());
    }
    return avg;
  }
};

struct DivergenceMatrix {
  std::vector<std::string> players;
  std::vector<std::vector<double>> values;  // values[i][j] = jsd(train_i, test_j)

  double max_same() const {
    double m = 0.0;
    for (size_t i = 0; i < players.size(); ++i) m = std::max(m, values[i][i]);
    return m;
  }
  double min_cross() const {
    double m = 1.0;
    for (size_t i = 0; i < players.size(); ++i)
      for (size_t j = 0; j < players.size(); ++j)
        if (i != j) m = std::min(m, values[i][j]);
    return m;
  }
};

struct AlignmentCell {
  double jsd = 0.0;
  double stddev = 0.0;
};

struct AlignmentTable {
  std::vector<std::string> players;
  std::vector<std::string> variants;  // column order after the Test column
  std::vector<AlignmentCell> test_column;
  std::vector<std::vector<AlignmentCell>> rows;  // rows[p][v]

  AlignmentCell average_test() const {
    AlignmentCell avg;
    for (const auto& c : test_column) {
      avg.jsd += c.jsd;
      avg.stddev += c.stddev;
    }
    avg.jsd /= double(test_column.size());
    avg.stddev /= double(test_column.size());
    return avg;
  }
  std::vector<AlignmentCell> average() const {
    std::vector<AlignmentCell> avg(variants.size());
    for (size_t v = 0; v < variants.size(); ++v) {
      for (const auto& row : rows) {
        avg[v].jsd += row[v].jsd;
        avg[v].stddev += row[v].stddev;
      }
      avg[v].jsd /= double(rows.size());
      avg[v].stddev /= double(rows.size());
    }
    return avg;
  }
};

using Points = std::vector<std::pair<double, double>>;

struct ExperimentResult {
  AccuracyTable accuracy;
  DivergenceMatrix matrix;
  AlignmentTable alignment;
  style::Bounds bounds;
  std::map<std::string, uint64_t> seeds;      // named sub-seeds, for the manifest
  std::vector<double> pretrain_losses;
  std::vector<double> ae_epoch_mse;
  // projection dump rows (player, game, ply, x, y) for the train/test data
  std::vector<std::tuple<std::string, uint32_t, uint16_t, double, double>> projections;
  std::map<std::string, style::GridHistogram> histograms;  // per distribution key
};

namespace detail {

inline std::vector<style::TransitionVector> pair_transitions(
    const std::vector<dataset::StateActionPair>& pairs) {
  std::vector<style::TransitionVector> out(pairs.size());
  parallel_for(pairs.size(), [&](size_t i) {
    out[i] = style::transition_vector(pairs[i].state, pairs[i].played);
  });
  return out;
}

inline Points project_all(const style::AutoEncoder& ae, const style::Projector& proj,
                          const std::vector<style::TransitionVector>& transitions) {
  Points points(transitions.size());
  parallel_for(transitions.size(), [&](size_t i) {
    const auto latent = style::encode_latent(ae, transitions[i]);
    points[i] = style::project_2d(proj, latent);
  });
  return points;
}

// Bootstrap std of jsd(train_hist, column resample) over 100 seeded resamples.
inline AlignmentCell alignment_cell(const style::GridHistogram& train_hist,
                                    const Points& column_points, const style::Bounds& bounds,
                                    int grid, uint64_t seed) {
  if (column_points.empty()) throw DataError("alignment: empty transition set");
  const style::GridHistogram column_hist = style::build_histogram(column_points, bounds, grid);
  AlignmentCell cell;
  cell.jsd = style::jensen_shannon(train_hist, column_hist).jsd;

  constexpr int kResamples = 100;
  Rng rng(seed);
  Points resampled(column_points.size());
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < kResamples; ++r) {
    for (size_t i = 0; i < column_points.size(); ++i)
      resampled[i] = column_points[size_t(rng.next_below(column_points.size()))];
    const auto hist = style::build_histogram(resampled, bounds, grid);
    const double v = style::jensen_shannon(train_hist, hist).jsd;
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / kResamples;
  cell.stddev = std::sqrt(std::max(0.0, sum_sq / kResamples - mean * mean));
  return cell;
}

}  // namespace detail

// Per-player, per-variant move choices on the test split, computed once and
// shared between the accuracy table and the alignment table. `choices` holds
// the deterministic selection (argmax / most-visited); `sampled` holds the
// k moves per position that feed alignment when samples > 1.
struct MoveChoices {
  // choices[player][variant_index][pair_index]
  std::map<std::string, std::vector<std::vector<chess::Move>>> choices;
  // sampled[player][variant_index][pair_index * samples + s]
  std::map<std::string, std::vector<std::vector<chess::Move>>> sampled;
  size_t samples = 1;
};

inline MoveChoices choose_moves(const policy::ModelBundle& bundle,
                                const std::map<std::string, dataset::PlayerDataset>& datasets,
                                const std::vector<std::string>& variants,
                                const mcts::SearchConfig& search, size_t samples = 1,
                                uint64_t root_seed = 0) {
  MoveChoices out;
  out.samples = samples;
  for (const auto& [player, ds] : datasets) {
    auto& per_variant = out.choices[player];
    auto& per_variant_sampled = out.sampled[player];
    per_variant.resize(variants.size());
    per_variant_sampled.resize(variants.size());
    for (size_t v = 0; v < variants.size(); ++v) {
      const std::string& variant = variants[v];
      const std::span<const double> embedding =
          variant == "base" ? std::span<const double>(bundle.model.generic_embedding)
                            : bundle.embedding_for(player);
      const bool use_mcts = variant == "finetuned+mcts";
      auto& chosen = per_variant[v];
      auto& drawn = per_variant_sampled[v];
      chosen.resize(ds.test.size());
      drawn.resize(ds.test.size() * samples);
      parallel_for(ds.test.size(), [&](size_t i) {
        if (use_mcts) {
          auto stats = mcts::run_search(ds.test[i].state,
                                        policy::make_evaluator(bundle.model, embedding), search);
          chosen[i] = mcts::select_most_visited(stats);
          if (samples == 1) {
            drawn[i] = chosen[i];
          } else {
            Rng rng(derive_seed(root_seed,
                                "samples/" + variant + "/" + player + "/" + std::to_string(i)));
            std::vector<double> weights(stats.size());
            for (size_t k = 0; k < stats.size(); ++k) weights[k] = double(stats[k].visits);
            for (size_t s = 0; s < samples; ++s)
              drawn[i * samples + s] = stats[rng.pick_weighted(weights)].move;
          }
        } else {
          policy::Prediction pred = policy::predict(bundle.model, embedding, ds.test[i].state);
          chosen[i] = pred.moves[pred.argmax()];
          if (samples == 1) {
            drawn[i] = chosen[i];
          } else {
            Rng rng(derive_seed(root_seed,
                                "samples/" + variant + "/" + player + "/" + std::to_string(i)));
            for (size_t s = 0; s < samples; ++s)
              drawn[i * samples + s] = pred.moves[rng.pick_weighted(pred.probs)];
          }
        }
      });
    }
  }
  return out;
}

inline AccuracyTable accuracy_from_choices(
    const std::map<std::string, dataset::PlayerDataset>& datasets,
    const std::vector<std::string>& players, const std::vector<std::string>& variants,
    const MoveChoices& choices, uint64_t root_seed) {
  AccuracyTable table;
  table.players = players;
  table.variants = variants;
  for (const auto& player : players) {
    const auto& ds = datasets.at(player);
    if (ds.test.empty()) throw DataError("accuracy: empty test set for " + player);
    const auto& per_variant = choices.choices.at(player);
    std::vector<AccuracyCell> row;
    for (size_t v = 0; v < variants.size(); ++v) {
      std::vector<uint8_t> hits(ds.test.size());
      for (size_t i = 0; i < ds.test.size(); ++i)
        hits[i] = per_variant[v][i] == ds.test[i].played ? 1 : 0;
      double mean = 0.0;
      for (uint8_t h : hits) mean += h;
      mean /= double(hits.size());

      Rng rng(derive_seed(root_seed, "bootstrap/accuracy/" + variants[v] + "/" + player));
      constexpr int kResamples = 100;
      double sum = 0.0, sum_sq = 0.0;
      for (int r = 0; r < kResamples; ++r) {
        double acc = 0.0;
        for (size_t i = 0; i < hits.size(); ++i)
          acc += hits[size_t(rng.next_below(hits.size()))];
        acc /= double(hits.size());
        sum += acc;
        sum_sq += acc * acc;
      }
      const double m = sum / kResamples;
      row.push_back({mean, std::sqrt(std::max(0.0, sum_sq / kResamples - m * m))});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// The style space of one evaluation run: shared autoencoder, projector, and
// grid bounds pooled over every distribution that will be compared.
struct StyleSpace {
  style::AutoEncoder ae;
  style::Projector projector;
  style::Bounds bounds;
  int grid = 15;
  std::map<std::string, Points> distributions;  // "train/<p>", "test/<p>", "model/<v>/<p>"
  std::vector<double> ae_epoch_mse;

  style::GridHistogram histogram(const std::string& key) const {
    return style::build_histogram(distributions.at(key), bounds, grid);
  }
};

inline DivergenceMatrix matrix_from_space(const StyleSpace& space,
                                          const std::vector<std::string>& players) {
  DivergenceMatrix m;
  m.players = players;
  std::vector<style::GridHistogram> train_hists, test_hists;
  for (const auto& p : players) {
    train_hists.push_back(space.histogram("train/" + p));
    test_hists.push_back(space.histogram("test/" + p));
  }
  m.values.assign(players.size(), std::vector<double>(players.size(), 0.0));
  for (size_t i = 0; i < players.size(); ++i)
    for (size_t j = 0; j < players.size(); ++j)
      m.values[i][j] = style::jensen_shannon(train_hists[i], test_hists[j]).jsd;
  return m;
}

inline AlignmentTable alignment_from_space(const StyleSpace& space,
                                           const std::vector<std::string>& players,
                                           const std::vector<std::string>& variants,
                                           uint64_t root_seed) {
  AlignmentTable table;
  table.players = players;
  table.variants = variants;
  for (const auto& p : players) {
    const auto train_hist = space.histogram("train/" + p);
    table.test_column.push_back(detail::alignment_cell(
        train_hist, space.distributions.at("test/" + p), space.bounds, space.grid,
        derive_seed(root_seed, "bootstrap/align/test/" + p)));
    std::vector<AlignmentCell> row;
    for (const auto& v : variants)
      row.push_back(detail::alignment_cell(
          train_hist, space.distributions.at("model/" + v + "/" + p), space.bounds, space.grid,
          derive_seed(root_seed, "bootstrap/align/" + v + "/" + p)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Builds the shared style space: trains the autoencoder on pooled train
// transitions, fits the projector on their latents, projects every
// distribution, and pools grid bounds across all of them.
inline StyleSpace build_style_space(
    const std::map<std::string, dataset::PlayerDataset>& datasets,
    const std::vector<std::string>& players, const std::vector<std::string>& variants,
    const MoveChoices* choices, const ExperimentConfig& config) {
  StyleSpace space;
  space.grid = config.grid;

  std::map<std::string, std::vector<style::TransitionVector>> transitions;
  std::vector<style::TransitionVector> pooled_train;
  for (const auto& p : players) {
    const auto& ds = datasets.at(p);
    if (ds.train.empty() || ds.test.empty())
      throw DataError("style space: empty train or test transitions for " + p);
    auto train = detail::pair_transitions(ds.train);
    pooled_train.insert(pooled_train.end(), train.begin(), train.end());
    transitions["train/" + p] = std::move(train);
    transitions["test/" + p] = detail::pair_transitions(ds.test);
    if (choices) {
      const auto& per_variant = choices->sampled.at(p);
      const size_t samples = choices->samples;
      for (size_t v = 0; v < variants.size(); ++v) {
        std::vector<style::TransitionVector> model_tr(ds.test.size() * samples);
        for (size_t i = 0; i < ds.test.size(); ++i)
          for (size_t s = 0; s < samples; ++s)
            model_tr[i * samples + s] =
                style::transition_vector(ds.test[i].state, per_variant[v][i * samples + s]);
        transitions["model/" + variants[v] + "/" + p] = std::move(model_tr);
      }
    }
  }

  style::AeConfig ae_config = config.ae;
  ae_config.seed = derive_seed(config.root_seed, "ae");
  auto trained = style::train_autoencoder(pooled_train, ae_config);
  space.ae = std::move(trained.ae);
  space.ae_epoch_mse = std::move(trained.epoch_mse);

  // Projector fitted on the pooled train latents.
  {
    std::vector<const style::TransitionVector*> refs(pooled_train.size());
    for (size_t i = 0; i < pooled_train.size(); ++i) refs[i] = &pooled_train[i];
    nn::Matrix latents = style::encode_latents(space.ae, refs);
    space.projector = style::fit_projector(latents);
  }

  bool first = true;
  for (const auto& [key, trs] : transitions) {
    Points pts = detail::project_all(space.ae, space.projector, trs);
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
  return space;
}

// The full experiment: fine-tune per player, choose moves once, build the
// shared style space, and derive all three reports from it.
inline ExperimentResult run_experiment(const ExperimentConfig& config,
                                       policy::ModelBundle& bundle,
                                       const std::map<std::string, dataset::PlayerDataset>& datasets) {
  config.validate();
  ExperimentResult result;

  const bool needs_finetuned = std::any_of(config.variants.begin(), config.variants.end(),
                                           [](const std::string& v) { return v != "base"; });
  if (needs_finetuned) {
    std::vector<std::string> to_tune;
    for (const auto& p : config.players)
      if (!bundle.players.count(p)) to_tune.push_back(p);
    std::vector<policy::FinetuneResult> tuned(to_tune.size());
    parallel_for(to_tune.size(), [&](size_t i) {
      policy::TrainConfig ft = config.finetune;
      ft.seed = derive_seed(config.root_seed, "finetune/" + to_tune[i]);
      ft.freeze_backbone = true;
      tuned[i] = policy::finetune_embedding(bundle.model, to_tune[i],
                                            datasets.at(to_tune[i]).train, ft);
    });
    for (size_t i = 0; i < to_tune.size(); ++i)
      bundle.players[to_tune[i]] = std::move(tuned[i].embedding);
  }

  MoveChoices choices = choose_moves(bundle, datasets, config.variants, config.search,
                                     config.samples, config.root_seed);
  result.accuracy = accuracy_from_choices(datasets, config.players, config.variants, choices,
                                          config.root_seed);

  StyleSpace space =
      build_style_space(datasets, config.players, config.variants, &choices, config);
  result.matrix = matrix_from_space(space, config.players);
  result.alignment =
      alignment_from_space(space, config.players, config.variants, config.root_seed);
  result.bounds = space.bounds;
  result.ae_epoch_mse = space.ae_epoch_mse;

  for (const auto& p : config.players) {
    for (auto [prefix, pairs] : {std::make_pair("train/", &datasets.at(p).train),
                                 std::make_pair("test/", &datasets.at(p).test)}) {
      const Points& pts = space.distributions.at(prefix + p);
      for (size_t i = 0; i < pairs->size(); ++i)
        result.projections.emplace_back(p, (*pairs)[i].game_id, (*pairs)[i].ply, pts[i].first,
                                        pts[i].second);
    }
  }
  for (const auto& [key, _] : space.distributions)
    result.histograms[key] = space.histogram(key);

  result.seeds["root"] = config.root_seed;
  result.seeds["ae"] = derive_seed(config.root_seed, "ae");
  for (const auto& p : config.players) {
    result.seeds["finetune/" + p] = derive_seed(config.root_seed, "finetune/" + p);
    result.seeds["bootstrap/align/test/" + p] =
        derive_seed(config.root_seed, "bootstrap/align/test/" + p);
    for (const auto& v : config.variants) {
      result.seeds["bootstrap/align/" + v + "/" + p] =
          derive_seed(config.root_seed, "bootstrap/align/" + v + "/" + p);
      result.seeds["bootstrap/accuracy/" + v + "/" + p] =
          derive_seed(config.root_seed, "bootstrap/accuracy/" + v + "/" + p);
    }
  }
  result.seeds["mcts"] = config.search.seed;
  return result;
}

}  // namespace stylebench::eval
