#include <catch2/catch.hpp>

#include <numeric>

#include "stylebench/mcts/search.hpp"

using namespace stylebench;
using namespace stylebench::chess;
using namespace stylebench::mcts;

namespace {

// Evaluator with fixed priors for the first few moves (label order) and a
// constant value.
struct StubEval {
  std::vector<double> head_priors;
  double value = 0.0;

  std::pair<std::vector<double>, double> operator()(const BoardState&,
                                                    const std::vector<Move>& legal) const {
    std::vector<double> priors(legal.size(), 0.0);
    double assigned = 0.0;
    for (size_t i = 0; i < legal.size() && i < head_priors.size(); ++i) {
      priors[i] = head_priors[i];
      assigned += head_priors[i];
    }
    const double rest = 1.0 - assigned;
    const size_t tail = legal.size() > head_priors.size() ? legal.size() - head_priors.size() : 0;
    for (size_t i = head_priors.size(); i < legal.size(); ++i) priors[i] = rest / double(tail);
    return {priors, value};
  }
};

std::pair<std::vector<double>, double> uniform_eval(const BoardState&,
                                                    const std::vector<Move>& legal) {
  return {std::vector<double>(legal.size(), 1.0 / double(legal.size())), 0.0};
}

int total_visits(const std::vector<RootMoveStats>& stats) {
  int n = 0;
  for (const auto& s : stats) n += s.visits;
  return n;
}

}  // namespace

TEST_CASE("puct_score: hand-evaluated cases") {
  CHECK(puct_score(0.0, 0.5, 4, 1, 1.5) == Approx(0.75).margin(1e-12));
  CHECK(puct_score(0.2, 0.1, 100, 9, 1.5) == Approx(0.35).margin(1e-12));
  // N = 0: the exploration term vanishes and the score is q.
  CHECK(puct_score(0.45, 0.7, 0, 3, 2.0) == Approx(0.45).margin(1e-12));
}

TEST_CASE("run_search: single legal root move receives all simulations") {
  BoardState s = parse_fen("k7/R7/1R6/8/8/8/8/K7 b - - 0 1");
  REQUIRE(legal_moves(s).size() == 1);
  SearchConfig config;
  config.simulations = 57;
  auto stats = run_search(s, uniform_eval, config);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].visits == 57);
}

TEST_CASE("run_search: two uniform moves with a neutral value head split evenly") {
  // White king h6 has exactly two legal moves (g6 and h5 are attacked... use a
  // crafted position with two moves, verified below).
  BoardState s = parse_fen("8/8/8/8/8/2k5/8/K7 w - - 0 1");
  REQUIRE(legal_moves(s).size() == 2);
  SearchConfig config;
  config.simulations = 100;
  auto stats = run_search(s, uniform_eval, config);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].visits == 50);
  CHECK(stats[1].visits == 50);
}

TEST_CASE("run_search: eta prunes low-prior children before renormalization") {
  // Position with exactly 3 legal moves; priors 0.6 / 0.3 / 0.1, eta = 0.5.
  BoardState s = parse_fen("8/8/7P/8/8/2k5/8/K7 w - - 0 1");
  REQUIRE(legal_moves(s).size() == 3);
  SearchConfig config;
  config.simulations = 100;
  config.eta = 0.5;
  StubEval eval{{0.6, 0.3, 0.1}, 0.0};
  auto stats = run_search(s, eval, config);
  REQUIRE(stats.size() == 1);  // only the 0.6 child is retained
  CHECK(stats[0].visits == 100);
  CHECK(stats[0].prior == Approx(1.0));
}

TEST_CASE("run_search: all-pruned root falls back to the single best prior") {
  BoardState s = parse_fen("8/8/7P/8/8/2k5/8/K7 w - - 0 1");
  SearchConfig config;
  config.simulations = 20;
  config.eta = 0.9;  // above every prior
  StubEval eval{{0.5, 0.3, 0.2}, 0.0};
  auto stats = run_search(s, eval, config);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].visits == 20);
}

TEST_CASE("run_search: visit conservation at the root") {
  SearchConfig config;
  config.simulations = 100;
  for (const char* fen :
       {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1",
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1"}) {
    auto stats = run_search(parse_fen(fen), uniform_eval, config);
    CHECK(total_visits(stats) == 100);
  }
}

TEST_CASE("run_search: prior ordering drives visit ordering under neutral values") {
  BoardState s = start_position();
  StubEval eval{{0.30, 0.20, 0.15}, 0.0};  // remaining mass spread uniformly
  SearchConfig config;
  config.simulations = 200;
  config.eta = 0.0;
  auto stats = run_search(s, eval, config);
  CHECK(stats[0].visits >= stats[1].visits);
  CHECK(stats[1].visits >= stats[2].visits);
  for (size_t i = 3; i < stats.size(); ++i) CHECK(stats[2].visits >= stats[i].visits);
}

TEST_CASE("run_search: deterministic for a fixed configuration") {
  BoardState s = parse_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1");
  SearchConfig config;
  config.simulations = 80;
  auto a = run_search(s, uniform_eval, config);
  auto b = run_search(s, uniform_eval, config);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].move == b[i].move);
    CHECK(a[i].visits == b[i].visits);
  }
}

TEST_CASE("run_search: backed-up values stay within [-1, 1]") {
  BoardState s = parse_fen("rnb1kbnr/pppp1ppp/8/4p3/6P1/5P2/PPPPP2P/RNBQKBNR b KQkq - 0 2");
  StubEval eval{{}, 0.7};  // uniform priors, strongly optimistic value
  SearchConfig config;
  config.simulations = 150;
  auto stats = run_search(s, eval, config);
  for (const auto& st : stats) {
    CHECK(st.q <= 1.0 + 1e-12);
    CHECK(st.q >= -1.0 - 1e-12);
  }
  CHECK(total_visits(stats) == 150);
}

TEST_CASE("run_search: checkmate one ply away is found and valued") {
  // White mates with Qb7 or similar; search should pile visits on mating moves
  // because terminal backups reward them.
  BoardState s = parse_fen("k7/8/1QK5/8/8/8/8/8 w - - 0 1");
  SearchConfig config;
  config.simulations = 200;
  auto stats = run_search(s, uniform_eval, config);
  chess::Move best = select_most_visited(stats);
  BoardState after = apply_move(s, best);
  CHECK(static_terminal(after) == StaticTerminal::Checkmate);
}

TEST_CASE("run_search: root terminal is an error") {
  BoardState mate = parse_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3");
  SearchConfig config;
  CHECK_THROWS_AS(run_search(mate, uniform_eval, config), DataError);
}

TEST_CASE("select_most_visited: argmax with lowest-label tie break") {
  RootMoveStats a{Move{8, 16, Promotion::None}, 0.5, 60, 0.0};
  RootMoveStats b{Move{8, 24, Promotion::None}, 0.5, 40, 0.0};
  std::vector<RootMoveStats> stats{a, b};
  CHECK(select_most_visited(stats) == a.move);

  stats[1].visits = 60;  // tie; a has the lower label
  CHECK(select_most_visited(stats) == a.move);

  std::vector<RootMoveStats> single{b};
  CHECK(select_most_visited(single) == b.move);
  CHECK_THROWS_AS(select_most_visited(std::vector<RootMoveStats>{}), DataError);
}

TEST_CASE("search config validation") {
  SearchConfig bad;
  bad.simulations = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = SearchConfig{};
  bad.eta = 1.0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = SearchConfig{};
  bad.c = -0.1;
  CHECK_THROWS_AS(bad.validate(), DataError);
}
