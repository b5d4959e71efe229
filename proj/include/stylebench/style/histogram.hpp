#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "stylebench/util/errors.hpp"

namespace stylebench::style {

struct Bounds {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

inline Bounds bounds_of(std::span<const std::pair<double, double>> points) {
  if (points.empty()) throw DataError("bounds_of: no points");
  Bounds b{points[0].first, points[0].first, points[0].second, points[0].second};
  for (const auto& [x, y] : points) {
    b.xmin = std::min(b.xmin, x);
    b.xmax = std::max(b.xmax, x);
    b.ymin = std::min(b.ymin, y);
    b.ymax = std::max(b.ymax, y);
  }
  return b;
}

// Probability distribution over a regular grid x grid lattice with shared
// bounds. bins are row-major: bins[iy * grid + ix].
struct GridHistogram {
  int grid = 15;
  Bounds bounds;
  std::vector<double> bins;
  size_t samples = 0;
};

// bin index = min(floor((v - lo) / (hi - lo) * grid), grid - 1); the upper
// edge clamps into the last bin. Points outside the bounds are a pipeline
// bug upstream and throw.
inline GridHistogram build_histogram(std::span<const std::pair<double, double>> points,
                                     const Bounds& bounds, int grid = 15) {
  if (grid < 1) throw DataError("build_histogram: grid must be >= 1");
  if (!(bounds.xmin < bounds.xmax) || !(bounds.ymin < bounds.ymax))
    throw DataError("build_histogram: degenerate bounds");
  GridHistogram h;
  h.grid = grid;
  h.bounds = bounds;
  h.bins.assign(size_t(grid) * size_t(grid), 0.0);
  h.samples = points.size();

  const double x_scale = double(grid) / (bounds.xmax - bounds.xmin);
  const double y_scale = double(grid) / (bounds.ymax - bounds.ymin);
  for (const auto& [x, y] : points) {
    if (x < bounds.xmin || x > bounds.xmax || y < bounds.ymin || y > bounds.ymax)
      throw DataError("build_histogram: point outside shared bounds");
    const int ix = std::min(int((x - bounds.xmin) * x_scale), grid - 1);
    const int iy = std::min(int((y - bounds.ymin) * y_scale), grid - 1);
    h.bins[size_t(iy) * size_t(grid) + size_t(ix)] += 1.0;
  }
  if (h.samples > 0)
    for (double& b : h.bins) b /= double(h.samples);
  return h;
}

}  // namespace stylebench::style
