#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "stylebench/chess/movegen.hpp"
#include "stylebench/dataset/labels.hpp"

namespace stylebench::mcts {

struct SearchConfig {
  int simulations = 100;
  double c = 1.5;       // exploration constant
  double eta = 0.01;    // prior pruning threshold
  uint64_t seed = 0;    // reserved; selection itself is deterministic

  void validate() const {
    if (simulations < 1) throw DataError("SearchConfig: simulations must be >= 1");
    if (c < 0.0) throw DataError("SearchConfig: c must be >= 0");
    if (!(eta >= 0.0 && eta < 1.0)) throw DataError("SearchConfig: eta must be in [0,1)");
  }
};

// PUCT(s,a) = Q(s,a) + c * P(s,a) * sqrt(N(s)) / (1 + N(s,a))
inline double puct_score(double q, double p, int parent_visits, int child_visits, double c) {
  return q + c * p * std::sqrt(double(parent_visits)) / (1.0 + double(child_visits));
}

struct RootMoveStats {
  chess::Move move;
  double prior = 0.0;   // renormalized over the retained children
  int visits = 0;
  double q = 0.0;       // mean backed-up value, 0 while unvisited
};

// Argmax by visit count; ties broken by lowest move label.
inline chess::Move select_most_visited(std::span<const RootMoveStats> stats) {
  if (stats.empty()) throw DataError("select_most_visited: empty visit distribution");
  size_t best = 0;
  for (size_t i = 1; i < stats.size(); ++i)
    if (stats[i].visits > stats[best].visits) best = i;
  return stats[best].move;
}

namespace detail {

struct Edge {
  chess::Move move;
  double prior = 0.0;
  int visits = 0;
  double value_sum = 0.0;
  int child = -1;  // node index, -1 until created

  double q() const { return visits > 0 ? value_sum / double(visits) : 0.0; }
};

struct Node {
  chess::BoardState state;
  uint64_t key = 0;
  bool expanded = false;
  bool terminal = false;
  double terminal_value = 0.0;  // from the perspective of the side to move here
  std::vector<Edge> edges;
};

// Children whose raw prior falls below eta are dropped before renormalization;
// when everything would be pruned, the single highest-prior child survives.
inline void prune_and_renormalize(std::vector<Edge>& edges, double eta) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const Edge& e : edges)
    if (e.prior >= eta) kept.push_back(e);
  if (kept.empty()) {
    size_t best = 0;
    for (size_t i = 1; i < edges.size(); ++i)
      if (edges[i].prior > edges[best].prior) best = i;
    kept.push_back(edges[best]);
  }
  double total = 0.0;
  for (const Edge& e : kept) total += e.prior;
  if (total > 0.0)
    for (Edge& e : kept) e.prior /= total;
  else
    for (Edge& e : kept) e.prior = 1.0 / double(kept.size());
  edges = std::move(kept);
}

}  // namespace detail

// Evaluator contract: f(state, legal_moves) -> (priors aligned with legal_moves, value),
// with the value from the perspective of state.side_to_move.
template <class Evaluator>
std::vector<RootMoveStats> run_search(const chess::BoardState& root_state, Evaluator&& evaluate,
                                      const SearchConfig& config) {
  config.validate();

  std::vector<detail::Node> nodes;
  nodes.reserve(size_t(config.simulations) + 1);

  // Terminal check: mate/stalemate/50-move from the state, threefold via the
  // zobrist keys of this node's path from the root.
  auto expand = [&](size_t node_index, std::span<const uint64_t> path_keys) {
    detail::Node& node = nodes[node_index];
    const auto legal = chess::legal_moves(node.state);
    if (legal.empty()) {
      node.terminal = true;
      node.terminal_value = chess::in_check(node.state) ? -1.0 : 0.0;
      return;
    }
    if (node.state.halfmove_clock >= 100) {
      node.terminal = true;
      node.terminal_value = 0.0;
      return;
    }
    int repeats = 0;
    for (uint64_t k : path_keys)
      if (k == node.key) ++repeats;
    if (repeats >= 3) {
      node.terminal = true;
      node.terminal_value = 0.0;
      return;
    }
    auto [priors, value] = evaluate(node.state, legal);
    node.edges.resize(legal.size());
    for (size_t i = 0; i < legal.size(); ++i) {
      node.edges[i].move = legal[i];
      node.edges[i].prior = priors[i];
    }
    detail::prune_and_renormalize(node.edges, config.eta);
    node.expanded = true;
    node.terminal_value = value;  // reused as the expansion value to back up
  };

  {
    detail::Node root;
    root.state = root_state;
    root.key = chess::zobrist_key(root_state);
    nodes.push_back(std::move(root));
    std::vector<uint64_t> root_path{nodes[0].key};
    expand(0, root_path);
  }
  if (nodes[0].terminal) throw DataError("run_search: root state is terminal");

  std::vector<uint64_t> path_keys;
  std::vector<std::pair<size_t, size_t>> path;  // (node, edge index)

  for (int sim = 0; sim < config.simulations; ++sim) {
    size_t current = 0;
    path_keys.assign(1, nodes[0].key);
    path.clear();
    double leaf_value = 0.0;

    while (true) {
      detail::Node& node = nodes[current];
      if (node.terminal) {
        leaf_value = node.terminal_value;
        break;
      }
      if (!node.expanded) {
        expand(current, path_keys);
        leaf_value = nodes[current].terminal_value;
        break;
      }

      int parent_visits = 0;
      for (const detail::Edge& e : node.edges) parent_visits += e.visits;
      size_t chosen = 0;
      if (parent_visits == 0) {
        // Fresh node: fall back to the highest prior, ties by lowest label.
        for (size_t i = 1; i < node.edges.size(); ++i)
          if (node.edges[i].prior > node.edges[chosen].prior) chosen = i;
      } else {
        double best = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < node.edges.size(); ++i) {
          const detail::Edge& e = node.edges[i];
          const double score = puct_score(e.q(), e.prior, parent_visits, e.visits, config.c);
          if (score > best) {
            best = score;
            chosen = i;
          }
        }
      }

      int child_index = nodes[current].edges[chosen].child;
      if (child_index < 0) {
        detail::Node child;
        child.state =
            chess::apply_move_unchecked(nodes[current].state, nodes[current].edges[chosen].move);
        child.key = chess::zobrist_key(child.state);
        child_index = int(nodes.size());
        nodes[current].edges[chosen].child = child_index;
        nodes.push_back(std::move(child));  // may reallocate the pool
      }
      path.emplace_back(current, chosen);
      current = size_t(child_index);
      path_keys.push_back(nodes[current].key);
    }

    // Negamax backup: leaf_value is from the leaf mover's perspective; each
    // edge stores the value from the parent mover's perspective.
    double value = leaf_value;
    for (size_t i = path.size(); i-- > 0;) {
      value = -value;
      detail::Edge& edge = nodes[path[i].first].edges[path[i].second];
      edge.visits += 1;
      edge.value_sum += value;
    }
  }

  std::vector<RootMoveStats> stats(nodes[0].edges.size());
  for (size_t i = 0; i < stats.size(); ++i) {
    const detail::Edge& e = nodes[0].edges[i];
    stats[i] = {e.move, e.prior, e.visits, e.q()};
  }
  return stats;
}

}  // namespace stylebench::mcts
