#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "stylebench/util/errors.hpp"

namespace stylebench::nn {

struct MaskedCeResult {
  double loss = 0.0;
  std::vector<double> grad;  // same length as the logits passed in
};

// Softmax cross-entropy over a compacted vector of logits for the legal
// labels only; target_index addresses that vector. Gradient is the usual
// p - one_hot(target), which sums to zero over the legal set.
inline MaskedCeResult masked_cross_entropy_compact(std::span<const double> legal_logits,
                                                   size_t target_index) {
  if (legal_logits.empty()) throw DataError("masked_cross_entropy: empty legal set");
  if (target_index >= legal_logits.size())
    throw DataError("masked_cross_entropy: target outside the legal set");
  const double max_logit = *std::max_element(legal_logits.begin(), legal_logits.end());
  double sum = 0.0;
  MaskedCeResult r;
  r.grad.resize(legal_logits.size());
  for (size_t i = 0; i < legal_logits.size(); ++i) {
    r.grad[i] = std::exp(legal_logits[i] - max_logit);
    sum += r.grad[i];
  }
  for (double& g : r.grad) g /= sum;
  r.loss = -std::log(r.grad[target_index]);
  r.grad[target_index] -= 1.0;
  return r;
}

// Label-indexed variant matching the operation contract: logits indexed by
// label, a legal label set, and a target label. Gradient entries outside the
// legal set are exactly zero.
inline MaskedCeResult masked_cross_entropy(std::span<const double> logits_by_label,
                                           std::span<const int> legal_labels, int target_label) {
  if (legal_labels.empty()) throw DataError("masked_cross_entropy: empty legal set");
  std::vector<double> compact(legal_labels.size());
  size_t target_index = legal_labels.size();
  for (size_t i = 0; i < legal_labels.size(); ++i) {
    const int label = legal_labels[i];
    if (label < 0 || size_t(label) >= logits_by_label.size())
      throw DataError("masked_cross_entropy: label out of range");
    compact[i] = logits_by_label[size_t(label)];
    if (label == target_label) target_index = i;
  }
  if (target_index == legal_labels.size())
    throw DataError("masked_cross_entropy: target not in the legal set");
  MaskedCeResult inner = masked_cross_entropy_compact(compact, target_index);
  MaskedCeResult r;
  r.loss = inner.loss;
  r.grad.assign(logits_by_label.size(), 0.0);
  for (size_t i = 0; i < legal_labels.size(); ++i)
    r.grad[size_t(legal_labels[i])] = inner.grad[i];
  return r;
}

// Per-sample squared error, averaged over dimensions; grad w.r.t. pred.
inline double mse(std::span<const double> pred, std::span<const double> target,
                  std::span<double> grad) {
  if (pred.size() != target.size() || grad.size() != pred.size())
    throw DataError("mse: shape mismatch");
  const double inv = 1.0 / double(pred.size());
  double loss = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    loss += d * d;
    grad[i] = 2.0 * d * inv;
  }
  return loss * inv;
}

}  // namespace stylebench::nn
