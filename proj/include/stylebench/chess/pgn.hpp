#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stylebench/chess/san.hpp"

namespace stylebench::chess {

struct PgnGame {
  std::vector<std::pair<std::string, std::string>> tags;
  std::string white;
  std::string black;
  std::string result = "*";
  std::optional<std::string> setup_fen;  // from a FEN tag, when present
  std::vector<Move> moves;

  std::string tag(const std::string& key, const std::string& fallback = "") const {
    for (const auto& [k, v] : tags)
      if (k == key) return v;
    return fallback;
  }
  BoardState initial_state() const {
    return setup_fen ? parse_fen(*setup_fen) : start_position();
  }
};

struct PgnError {
  size_t game_index = 0;
  size_t ply = 0;  // 1-based ply of the offending token, 0 if not move-related
  std::string token;
  std::string message;
};

struct PgnParseResult {
  std::vector<PgnGame> games;   // games that replayed legally
  std::vector<PgnError> errors; // one entry per failed game
};

namespace detail {

inline bool is_result_token(std::string_view t) {
  return t == "1-0" || t == "0-1" || t == "1/2-1/2" || t == "*";
}

struct PgnLexer {
  std::string_view text;
  size_t pos = 0;
  bool at_line_start = true;

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        at_line_start = true;
        ++pos;
      } else if (std::isspace(uint8_t(c))) {
        ++pos;
      } else if (c == '{') {
        while (pos < text.size() && text[pos] != '}') ++pos;
        if (pos < text.size()) ++pos;
        at_line_start = false;
      } else if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (c == '(') {
        int depth = 0;
        while (pos < text.size()) {
          if (text[pos] == '(') ++depth;
          if (text[pos] == ')' && --depth == 0) {
            ++pos;
            break;
          }
          ++pos;
        }
        at_line_start = false;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  bool peek_header() {
    skip_ws();
    return pos < text.size() && text[pos] == '[' && at_line_start;
  }

  // Reads a "[Key \"Value\"]" line; pre: peek_header()
  std::pair<std::string, std::string> header() {
    ++pos;  // '['
    std::string key;
    while (pos < text.size() && !std::isspace(uint8_t(text[pos]))) key += text[pos++];
    while (pos < text.size() && text[pos] != '"' && text[pos] != ']' && text[pos] != '\n') ++pos;
    std::string value;
    if (pos < text.size() && text[pos] == '"') {
      ++pos;
      while (pos < text.size() && text[pos] != '"') {
        if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
        value += text[pos++];
      }
      if (pos < text.size()) ++pos;
    }
    while (pos < text.size() && text[pos] != ']' && text[pos] != '\n') ++pos;
    if (pos < text.size() && text[pos] == ']') ++pos;
    at_line_start = false;
    return {key, value};
  }

  std::string token() {
    skip_ws();
    std::string t;
    while (pos < text.size() && !std::isspace(uint8_t(text[pos])) && text[pos] != '{' &&
           text[pos] != ';' && text[pos] != '(' && text[pos] != ')')
      t += text[pos++];
    if (t.empty() && pos < text.size()) ++pos;  // stray ')': consume, keep making progress
    at_line_start = false;
    return t;
  }

  // Skips to the start of the next game (a header at line start) or EOF.
  void recover() {
    while (!eof() && !peek_header()) token();
  }
};

inline bool is_movetext_noise(std::string_view t) {
  if (t.empty()) return true;
  if (t[0] == '$') return true;  // NAG
  size_t i = 0;
  while (i < t.size() && std::isdigit(uint8_t(t[i]))) ++i;
  if (i == 0) return false;
  while (i < t.size() && t[i] == '.') ++i;
  return i == t.size();  // "12." / "12..." / bare number
}

}  // namespace detail

// Parses a concatenation of >= 0 PGN games. Games whose movetext fails to
// replay are reported in `errors` and omitted from `games`.
inline PgnParseResult parse_pgn(std::string_view text) {
  PgnParseResult out;
  detail::PgnLexer lex{text};
  size_t game_index = 0;

  while (!lex.eof()) {
    PgnGame game;
    bool saw_anything = false;
    while (lex.peek_header()) {
      auto [key, value] = lex.header();
      saw_anything = true;
      game.tags.emplace_back(key, value);
      if (key == "White") game.white = value;
      else if (key == "Black") game.black = value;
      else if (key == "Result") game.result = value;
      else if (key == "FEN") game.setup_fen = value;
    }

    BoardState state;
    try {
      state = game.initial_state();
    } catch (const DataError& e) {
      out.errors.push_back({game_index, 0, game.setup_fen.value_or(""), e.what()});
      lex.recover();
      ++game_index;
      continue;
    }

    bool failed = false;
    size_t ply = 0;
    while (!lex.eof() && !lex.peek_header()) {
      std::string t = lex.token();
      if (detail::is_movetext_noise(t)) continue;
      saw_anything = true;
      if (detail::is_result_token(t)) {
        if (game.tag("Result").empty()) game.result = t;
        break;
      }
      ++ply;
      try {
        const auto legal = legal_moves(state);
        Move m = parse_san(state, t, legal);
        state = apply_move_unchecked(state, m);
        game.moves.push_back(m);
      } catch (const DataError& e) {
        out.errors.push_back({game_index, ply, t, e.what()});
        failed = true;
        lex.recover();
        break;
      }
    }

    if (!saw_anything) break;
    if (!failed) out.games.push_back(std::move(game));
    ++game_index;
  }
  return out;
}

// Strict variant: throws DataError on the first malformed game.
inline std::vector<PgnGame> parse_pgn_strict(std::string_view text) {
  PgnParseResult r = parse_pgn(text);
  if (!r.errors.empty()) {
    const PgnError& e = r.errors.front();
    throw DataError("PGN game " + std::to_string(e.game_index) + ", ply " +
                    std::to_string(e.ply) + ", token '" + e.token + "': " + e.message);
  }
  return std::move(r.games);
}

inline std::string write_pgn(const PgnGame& game) {
  std::string out;
  auto emit_tag = [&](const std::string& k, const std::string& v) {
    out += "[" + k + " \"" + v + "\"]\n";
  };
  bool has_seven_tags = false;
  for (const auto& [k, v] : game.tags) {
    emit_tag(k, v);
    has_seven_tags = true;
  }
  if (!has_seven_tags) {
    emit_tag("Event", "?");
    emit_tag("White", game.white);
    emit_tag("Black", game.black);
    emit_tag("Result", game.result);
    if (game.setup_fen) {
      emit_tag("SetUp", "1");
      emit_tag("FEN", *game.setup_fen);
    }
  }
  out += "\n";

  BoardState state = game.initial_state();
  std::string line;
  for (size_t i = 0; i < game.moves.size(); ++i) {
    std::string item;
    if (state.side_to_move == Color::White)
      item = std::to_string(state.fullmove_number) + ". ";
    else if (i == 0)
      item = std::to_string(state.fullmove_number) + "... ";
    const auto legal = legal_moves(state);
    item += san_for_move_decorated(state, game.moves[i], legal);
    if (line.size() + item.size() + 1 > 80) {
      out += line + "\n";
      line.clear();
    }
    if (!line.empty()) line += ' ';
    line += item;
    state = apply_move_unchecked(state, game.moves[i]);
  }
  if (!line.empty()) line += ' ';
  line += game.result;
  out += line + "\n\n";
  return out;
}

}  // namespace stylebench::chess
