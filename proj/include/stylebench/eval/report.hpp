#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylebench/eval/experiment.hpp"
#include "stylebench/util/binio.hpp"
#include "stylebench/util/checksum.hpp"

namespace stylebench::eval {

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string pct1(double fraction) { return fmt("%.1f", fraction * 100.0); }
inline std::string jsd3(double v) { return fmt("%.3f", v); }

inline double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace detail

// CSV columns: player, then per variant accuracy and std, percentages with
// one decimal. The final row is the average.
inline std::string accuracy_csv(const AccuracyTable& table) {
  std::string out = "player";
  for (const auto& v : table.variants) out += "," + v + "," + v + "_std";
  out += "\n";
  auto emit_row = [&](const std::string& name, const std::vector<AccuracyCell>& row) {
    out += name;
    for (const auto& cell : row)
      out += "," + detail::pct1(cell.accuracy) + "," + detail::pct1(cell.stddev);
    out += "\n";
  };
  for (size_t p = 0; p < table.players.size(); ++p) emit_row(table.players[p], table.rows[p]);
  emit_row("average", table.average());
  return out;
}

inline std::string alignment_csv(const AlignmentTable& table) {
  std::string out = "player,test,test_std";
  for (const auto& v : table.variants) out += "," + v + "," + v + "_std";
  out += "\n";
  auto emit_row = [&](const std::string& name, const AlignmentCell& test,
                      const std::vector<AlignmentCell>& row) {
    out += name + "," + detail::jsd3(test.jsd) + "," + detail::jsd3(test.stddev);
    for (const auto& cell : row)
      out += "," + detail::jsd3(cell.jsd) + "," + detail::jsd3(cell.stddev);
    out += "\n";
  };
  for (size_t p = 0; p < table.players.size(); ++p)
    emit_row(table.players[p], table.test_column[p], table.rows[p]);
  emit_row("average", table.average_test(), table.average());
  return out;
}

// Rows are train players, columns test players, 3-decimal jsd.
inline std::string matrix_csv(const DivergenceMatrix& m) {
  std::string out = "train\\test";
  for (const auto& p : m.players) out += "," + p;
  out += "\n";
  for (size_t i = 0; i < m.players.size(); ++i) {
    out += m.players[i];
    for (size_t j = 0; j < m.players.size(); ++j) out += "," + detail::jsd3(m.values[i][j]);
    out += "\n";
  }
  return out;
}

inline nlohmann::json accuracy_json(const AccuracyTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  auto row_json = [&](const std::string& name, const std::vector<AccuracyCell>& row) {
    nlohmann::json r;
    r["player"] = name;
    for (size_t v = 0; v < table.variants.size(); ++v) {
      r[table.variants[v]] = detail::round3(row[v].accuracy);
      r[table.variants[v] + "_std"] = detail::round3(row[v].stddev);
    }
    return r;
  };
  for (size_t p = 0; p < table.players.size(); ++p)
    rows.push_back(row_json(table.players[p], table.rows[p]));
  rows.push_back(row_json("average", table.average()));
  return nlohmann::json{{"table", "move_accuracy"}, {"rows", rows}};
}

inline nlohmann::json alignment_json(const AlignmentTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  auto row_json = [&](const std::string& name, const AlignmentCell& test,
                      const std::vector<AlignmentCell>& row) {
    nlohmann::json r;
    r["player"] = name;
    r["test"] = detail::round3(test.jsd);
    r["test_std"] = detail::round3(test.stddev);
    for (size_t v = 0; v < table.variants.size(); ++v) {
      r[table.variants[v]] = detail::round3(row[v].jsd);
      r[table.variants[v] + "_std"] = detail::round3(row[v].stddev);
    }
    return r;
  };
  for (size_t p = 0; p < table.players.size(); ++p)
    rows.push_back(row_json(table.players[p], table.test_column[p], table.rows[p]));
  rows.push_back(row_json("average", table.average_test(), table.average()));
  return nlohmann::json{{"table", "stylistic_alignment"}, {"rows", rows}};
}

inline nlohmann::json matrix_json(const DivergenceMatrix& m) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& row : m.values) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(detail::round3(v));
    values.push_back(r);
  }
  return nlohmann::json{{"table", "divergence_matrix"}, {"players", m.players},
                        {"values", values}};
}

inline nlohmann::json histogram_json(const style::GridHistogram& h) {
  return nlohmann::json{{"grid", h.grid},
                        {"bounds", {{"xmin", h.bounds.xmin},
                                    {"xmax", h.bounds.xmax},
                                    {"ymin", h.bounds.ymin},
                                    {"ymax", h.bounds.ymax}}},
                        {"samples", h.samples},
                        {"bins", h.bins}};
}

// P2 (ASCII) grayscale heatmap: 0 maps to 0 and the matrix maximum to 255.
inline std::string matrix_pgm(const DivergenceMatrix& m) {
  const size_t n = m.players.size();
  double max_v = 0.0;
  for (const auto& row : m.values)
    for (double v : row) max_v = std::max(max_v, v);
  std::string out = "P2\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const int gray = max_v > 0.0 ? int(std::lround(m.values[i][j] / max_v * 255.0)) : 0;
      out += std::to_string(gray);
      out += j + 1 < n ? ' ' : '\n';
    }
  }
  return out;
}

// Colored-cell SVG with axis labels: rows = train players, columns = test.
inline std::string matrix_svg(const DivergenceMatrix& m) {
  const size_t n = m.players.size();
  const int cell = 48, margin = 110, legend = 30;
  const int width = margin + cell * int(n) + 20;
  const int height = margin + cell * int(n) + legend + 20;
  double max_v = 0.0;
  for (const auto& row : m.values)
    for (double v : row) max_v = std::max(max_v, v);

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<style>text{font-family:sans-serif;font-size:11px;}</style>\n";
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double t = max_v > 0.0 ? m.values[i][j] / max_v : 0.0;
      const int r = int(std::lround(255.0 * t));
      const int gb = int(std::lround(255.0 * (1.0 - t)));
      const int x = margin + int(j) * cell;
      const int y = margin + int(i) * cell;
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"rgb(" +
             std::to_string(r) + "," + std::to_string(gb) + "," + std::to_string(gb) +
             ")\" stroke=\"white\"/>\n";
      svg += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" +
             std::to_string(y + cell / 2 + 4) + "\" text-anchor=\"middle\" fill=\"" +
             (t > 0.55 ? "white" : "black") + "\">" + detail::jsd3(m.values[i][j]) +
             "</text>\n";
    }
  }
  for (size_t k = 0; k < n; ++k) {
    svg += "<text x=\"" + std::to_string(margin + int(k) * cell + cell / 2) + "\" y=\"" +
           std::to_string(margin - 8) + "\" text-anchor=\"middle\">" + m.players[k] +
           " (test)</text>\n";
    svg += "<text x=\"" + std::to_string(margin - 8) + "\" y=\"" +
           std::to_string(margin + int(k) * cell + cell / 2 + 4) +
           "\" text-anchor=\"end\">" + m.players[k] + " (train)</text>\n";
  }
  svg += "<text x=\"" + std::to_string(margin) + "\" y=\"" +
         std::to_string(margin + cell * int(n) + 20) +
         "\">Jensen-Shannon divergence, train vs test</text>\n";
  svg += "</svg>\n";
  return svg;
}

struct ManifestEntry {
  std::string path;
  uint64_t checksum = 0;
};

// JSON manifest: config echo, named seeds, artifact checksums, wall times.
inline void write_manifest(const std::string& path, const nlohmann::json& config_echo,
                           const std::map<std::string, uint64_t>& seeds,
                           const std::vector<ManifestEntry>& artifacts,
                           const std::map<std::string, double>& wall_seconds) {
  nlohmann::json j;
  j["config"] = config_echo;
  nlohmann::json seed_obj = nlohmann::json::object();
  for (const auto& [name, seed] : seeds) seed_obj[name] = seed;
  j["seeds"] = seed_obj;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& a : artifacts)
    files.push_back({{"path", a.path}, {"fnv1a64", checksum_hex(a.checksum)}});
  j["artifacts"] = files;
  nlohmann::json times = nlohmann::json::object();
  for (const auto& [name, secs] : wall_seconds) times[name] = secs;
  j["wall_clock_seconds"] = times;
  j["std_estimator"] = "bootstrap, 100 seeded resamples";
  write_text_file(path, j.dump(2) + "\n");
}

inline ManifestEntry write_artifact(const std::string& path, const std::string& bytes) {
  write_text_file(path, bytes);
  return {path, fnv1a64_bytes(bytes.data(), bytes.size())};
}

// Latent/projection dump: CSV with header (player, game, ply, x, y).
inline std::string projection_csv(
    const std::vector<std::tuple<std::string, uint32_t, uint16_t, double, double>>& rows) {
  std::string out = "player,game,ply,x,y\n";
  for (const auto& [player, game, ply, x, y] : rows)
    out += player + "," + std::to_string(game) + "," + std::to_string(ply) + "," +
           detail::fmt("%.6f", x) + "," + detail::fmt("%.6f", y) + "\n";
  return out;
}

// Emits every table in CSV and JSON plus the heatmaps; returns the entries
// for the manifest.
inline std::vector<ManifestEntry> emit_report(const ExperimentResult& result,
                                              const std::string& out_dir) {
  std::vector<ManifestEntry> entries;
  entries.push_back(write_artifact(out_dir + "/accuracy.csv", accuracy_csv(result.accuracy)));
  entries.push_back(
      write_artifact(out_dir + "/accuracy.json", accuracy_json(result.accuracy).dump(2) + "\n"));
  entries.push_back(write_artifact(out_dir + "/jsd_matrix.csv", matrix_csv(result.matrix)));
  entries.push_back(
      write_artifact(out_dir + "/jsd_matrix.json", matrix_json(result.matrix).dump(2) + "\n"));
  entries.push_back(write_artifact(out_dir + "/alignment.csv", alignment_csv(result.alignment)));
  entries.push_back(write_artifact(out_dir + "/alignment.json",
                                   alignment_json(result.alignment).dump(2) + "\n"));
  entries.push_back(write_artifact(out_dir + "/jsd_matrix.pgm", matrix_pgm(result.matrix)));
  entries.push_back(write_artifact(out_dir + "/jsd_matrix.svg", matrix_svg(result.matrix)));
  if (!result.projections.empty())
    entries.push_back(
        write_artifact(out_dir + "/projections.csv", projection_csv(result.projections)));
  if (!result.histograms.empty()) {
    nlohmann::json all = nlohmann::json::object();
    for (const auto& [key, hist] : result.histograms) all[key] = histogram_json(hist);
    entries.push_back(write_artifact(out_dir + "/histograms.json", all.dump(2) + "\n"));
  }
  return entries;
}

}  // namespace stylebench::eval
