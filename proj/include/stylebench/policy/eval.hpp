#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stylebench/mcts/search.hpp"
#include "stylebench/policy/model.hpp"
#include "stylebench/util/parallel.hpp"

namespace stylebench::policy {

// MCTS evaluator backed by the policy model: priors over the given legal
// moves plus the value-head estimate for the side to move.
inline auto make_evaluator(const PolicyModel& model, std::span<const double> embedding) {
  return [&model, embedding](const chess::BoardState& state,
                             const std::vector<chess::Move>& legal)
             -> std::pair<std::vector<double>, double> {
    Prediction pred = predict(model, embedding, state);
    // predict() orders moves identically to legal_moves, so priors align.
    (void)legal;
    return {pred.probs, pred.value};
  };
}

enum class MoveSelector { ArgmaxPolicy, MctsMostVisited };

// One move per position under the given selector; argmax ties resolve to the
// lowest move label, matching the search tie-break.
inline chess::Move select_move(const PolicyModel& model, std::span<const double> embedding,
                               const chess::BoardState& state, MoveSelector selector,
                               const mcts::SearchConfig& search) {
  if (selector == MoveSelector::ArgmaxPolicy) {
    Prediction pred = predict(model, embedding, state);
    return pred.moves[pred.argmax()];
  }
  auto stats = mcts::run_search(state, make_evaluator(model, embedding), search);
  return mcts::select_most_visited(stats);
}

struct AccuracyResult {
  double accuracy = 0.0;
  double stddev = 0.0;
};

// Fraction of pairs whose selected move equals the played move; std via 100
// seeded bootstrap resamples over pairs.
inline AccuracyResult move_accuracy(const PolicyModel& model, std::span<const double> embedding,
                                    const std::vector<dataset::StateActionPair>& pairs,
                                    MoveSelector selector, const mcts::SearchConfig& search,
                                    uint64_t bootstrap_seed = 0) {
  if (pairs.empty()) throw DataError("move_accuracy: empty test set");
  std::vector<uint8_t> hits(pairs.size(), 0);
  parallel_for(pairs.size(), [&](size_t i) {
    const chess::Move chosen = select_move(model, embedding, pairs[i].state, selector, search);
    hits[i] = chosen == pairs[i].played ? 1 : 0;
  });

  double mean = 0.0;
  for (uint8_t h : hits) mean += h;
  mean /= double(hits.size());

  constexpr int kResamples = 100;
  Rng rng(bootstrap_seed);
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < kResamples; ++r) {
    double acc = 0.0;
    for (size_t i = 0; i < hits.size(); ++i) acc += hits[size_t(rng.next_below(hits.size()))];
    acc /= double(hits.size());
    sum += acc;
    sum_sq += acc * acc;
  }
  const double m = sum / kResamples;
  return {mean, std::sqrt(std::max(0.0, sum_sq / kResamples - m * m))};
}

}  // namespace stylebench::policy
