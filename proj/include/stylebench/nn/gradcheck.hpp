#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "stylebench/util/errors.hpp"
#include "stylebench/util/rng.hpp"

namespace stylebench::nn {

// A model under gradient check: `loss` is a pure forward evaluation, `backward`
// recomputes the loss and fills the tensors viewed by `grads`. The spans in
// `params` alias the live parameters so the checker can perturb them in place.
struct GradCheckTarget {
  std::function<double()> loss;
  std::function<void()> backward;
  std::vector<std::span<double>> params;
  std::vector<std::span<const double>> grads;
};

// Central finite differences on `samples` randomly selected parameters.
// Returns max_i |g_bp - g_fd| / max(|g_bp|, |g_fd|, 1e-8).
inline double gradient_check(GradCheckTarget& target, size_t samples = 100, double h = 1e-5,
                             uint64_t seed = 0) {
  if (!std::isfinite(target.loss())) throw DataError("gradient_check: non-finite loss");
  target.backward();

  size_t total = 0;
  for (const auto& p : target.params) total += p.size();
  if (total == 0) throw DataError("gradient_check: no parameters");
  samples = std::min(samples, total);

  Rng rng(seed);
  double max_rel = 0.0;
  for (size_t k = 0; k < samples; ++k) {
    size_t flat = size_t(rng.next_below(total));
    size_t tensor = 0;
    while (flat >= target.params[tensor].size()) {
      flat -= target.params[tensor].size();
      ++tensor;
    }
    double& value = target.params[tensor][flat];
    const double analytic = target.grads[tensor][flat];
    const double saved = value;
    value = saved + h;
    const double up = target.loss();
    value = saved - h;
    const double down = target.loss();
    value = saved;
    const double fd = (up - down) / (2.0 * h);
    const double rel = std::abs(analytic - fd) /
                       std::max({std::abs(analytic), std::abs(fd), 1e-8});
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace stylebench::nn
