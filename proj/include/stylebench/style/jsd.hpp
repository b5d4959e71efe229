#pragma once

#include <cmath>
#include <span>

#include "stylebench/style/histogram.hpp"

namespace stylebench::style {

struct JsdResult {
  double jsd = 0.0;        // in [0, 1] under base-2 logs
  double distance = 0.0;   // sqrt(jsd), a metric
};

// JSD(P||Q) = 1/2 KL(P||M) + 1/2 KL(Q||M) with M = (P+Q)/2, base-2 logs, and
// the convention 0 * log(0/x) = 0. Inputs must be distributions over the
// same support.
inline JsdResult jensen_shannon(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DataError("jensen_shannon: mismatched supports");
  if (p.empty()) throw DataError("jensen_shannon: empty distributions");
  constexpr double kInvLn2 = 1.4426950408889634;  // 1 / ln 2
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    // Per-bin terms accumulate in value order so the result is bit-exactly
    // symmetric in (p, q).
    double a = p[i], b = q[i];
    if (a > b) std::swap(a, b);
    const double m = 0.5 * (a + b);
    double term = 0.0;
    if (a > 0.0) term += 0.5 * a * std::log(a / m) * kInvLn2;
    if (b > 0.0) term += 0.5 * b * std::log(b / m) * kInvLn2;
    acc += term;
  }
  JsdResult r;
  r.jsd = acc < 0.0 ? 0.0 : acc;  // guard rounding at identical inputs
  r.distance = std::sqrt(r.jsd);
  return r;
}

inline JsdResult jensen_shannon(const GridHistogram& p, const GridHistogram& q) {
  if (p.grid != q.grid) throw DataError("jensen_shannon: mismatched grids");
  if (!(p.bounds == q.bounds)) throw DataError("jensen_shannon: histograms use different bounds");
  if (p.samples == 0 || q.samples == 0)
    throw DataError("jensen_shannon: histogram built from zero points");
  return jensen_shannon(std::span<const double>(p.bins), std::span<const double>(q.bins));
}

}  // namespace stylebench::style
