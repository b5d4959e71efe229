#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stylebench/chess/encode.hpp"
#include "stylebench/chess/movegen.hpp"
#include "stylebench/dataset/pairs.hpp"
#include "stylebench/nn/adam.hpp"
#include "stylebench/nn/layers.hpp"
#include "stylebench/nn/losses.hpp"
#include "stylebench/nn/serialize.hpp"
#include "stylebench/util/checksum.hpp"

namespace stylebench::policy {

constexpr size_t kEmbedDim = 64;
constexpr size_t kInputDim = chess::EncodedPosition::kSize + kEmbedDim;  // 1216
constexpr size_t kHiddenDim = 512;
constexpr size_t kContextDim = 256;
// Spread of the per-player offsets around the generic embedding during
// pretraining; wide offsets push style discrimination into the embedding
// channel rather than into position cues.
constexpr double kPopulationOffsetScale = 2.0;

struct PlayerEmbedding {
  std::string player_id;
  std::vector<double> values;  // 64
  enum class Provenance { GenericCopy, FineTuned } provenance = Provenance::GenericCopy;
};

// Shared backbone conditioned on a 64-dim player embedding (injected by input
// concatenation so a frozen backbone still transmits embedding gradients),
// a move-embedding table for logits, and a tanh value head.
struct PolicyModel {
  nn::Mlp backbone;            // 1216 -> 512 -> 256, relu
  nn::Matrix move_table;       // 20480 x 256; logit(m) = dot(context, row m)
  nn::DenseLayer value_head;   // 256 -> 1, tanh
  std::vector<double> generic_embedding;

  PolicyModel()
      : backbone{nn::DenseLayer(kInputDim, kHiddenDim, nn::Activation::Relu),
                 nn::DenseLayer(kHiddenDim, kContextDim, nn::Activation::Relu)},
        move_table(dataset::kLabelSpace, kContextDim),
        value_head(kContextDim, 1, nn::Activation::Tanh),
        generic_embedding(kEmbedDim, 0.0) {}

  void init(uint64_t seed) {
    Rng rng(seed);
    backbone.init(rng);
    const double table_limit = std::sqrt(6.0 / double(kContextDim + dataset::kLabelSpace));
    for (double& v : move_table.data) v = rng.next_uniform(-table_limit, table_limit);
    value_head.init(rng);
    // Unit-scale embedding: keeps the embedding block of the first layer on a
    // par with the board block, so fine-tuned offsets move the policy.
    for (double& v : generic_embedding) v = rng.next_uniform(-1.0, 1.0);
  }

  // Checksum over every parameter the freeze contract protects.
  uint64_t frozen_checksum() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& layer : backbone.layers) {
      h = checksum_doubles(layer.w.data, h);
      h = checksum_doubles(layer.b, h);
    }
    h = checksum_doubles(move_table.data, h);
    h = checksum_doubles(value_head.w.data, h);
    h = checksum_doubles(value_head.b, h);
    return h;
  }

  std::vector<double> flat_parameters(const std::vector<double>& embedding) const {
    std::vector<double> flat;
    for (const auto& layer : backbone.layers) {
      flat.insert(flat.end(), layer.w.data.begin(), layer.w.data.end());
      flat.insert(flat.end(), layer.b.begin(), layer.b.end());
    }
    flat.insert(flat.end(), move_table.data.begin(), move_table.data.end());
    flat.insert(flat.end(), value_head.w.data.begin(), value_head.w.data.end());
    flat.insert(flat.end(), value_head.b.begin(), value_head.b.end());
    flat.insert(flat.end(), embedding.begin(), embedding.end());
    return flat;
  }
};

namespace detail {

inline void fill_input_row(double* row, const chess::EncodedPosition& pos,
                           std::span<const double> embedding) {
  for (size_t i = 0; i < chess::EncodedPosition::kSize; ++i) row[i] = double(pos.values[i]);
  for (size_t i = 0; i < kEmbedDim; ++i) row[chess::EncodedPosition::kSize + i] = embedding[i];
}

}  // namespace detail

struct Prediction {
  std::vector<chess::Move> moves;   // legal moves, label order
  std::vector<double> probs;        // same order, sums to 1
  double value = 0.0;               // in [-1, 1]

  size_t argmax() const {
    size_t best = 0;
    for (size_t i = 1; i < probs.size(); ++i)
      if (probs[i] > probs[best]) best = i;  // ties keep the lowest label
    return best;
  }
};

inline Prediction predict(const PolicyModel& model, std::span<const double> embedding,
                          const chess::BoardState& state) {
  const auto legal = chess::legal_moves(state);
  if (legal.empty()) throw DataError("predict: no legal moves (terminal state)");

  nn::Matrix x(1, kInputDim);
  detail::fill_input_row(x.row(0), chess::encode_position(state), embedding);
  nn::Matrix context = model.backbone.forward(x);

  Prediction out;
  out.moves = legal;
  std::vector<double> logits(legal.size());
  for (size_t i = 0; i < legal.size(); ++i) {
    const double* row = model.move_table.row(dataset::move_label(legal[i]));
    double acc = 0.0;
    for (size_t j = 0; j < kContextDim; ++j) acc += context.at(0, j) * row[j];
    logits[i] = acc;
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  out.probs.resize(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    out.probs[i] = std::exp(logits[i] - max_logit);
    sum += out.probs[i];
  }
  for (double& p : out.probs) p /= sum;

  nn::Matrix v;
  model.value_head.forward(context, v);
  out.value = v.at(0, 0);
  return out;
}

struct TrainConfig {
  size_t epochs = 20;
  double lr = 5e-4;
  size_t batch = 256;
  uint64_t seed = 0;
  bool freeze_backbone = false;

  void validate() const {
    if (lr <= 0.0) throw DataError("TrainConfig: lr must be > 0");
    if (batch < 1) throw DataError("TrainConfig: batch must be >= 1");
  }
};

namespace detail {

struct Trainer {
  PolicyModel& model;
  std::vector<double>& embedding;  // the tensor that receives embedding grads
  bool update_backbone;
  bool with_value_loss;
  nn::AdamHyper hp;
  // Population conditioning during pretraining: each sample sees
  // embedding + a fixed seeded offset for its player, so the backbone learns
  // directions that discriminate styles. Offsets are not model parameters.
  std::map<std::string, std::vector<double>> population_offsets;

  std::vector<nn::LayerGrads> backbone_grads;
  nn::Matrix move_table_grads;
  nn::LayerGrads value_grads;
  std::vector<double> embedding_grads;

  std::vector<nn::AdamState> backbone_states;
  nn::AdamState move_table_state;
  nn::AdamState value_w_state, value_b_state;
  nn::AdamState embedding_state;

  Trainer(PolicyModel& m, std::vector<double>& emb, bool backbone, bool value_loss, double lr)
      : model(m), embedding(emb), update_backbone(backbone), with_value_loss(value_loss) {
    hp.lr = lr;
    backbone_grads.resize(model.backbone.layers.size());
    for (size_t k = 0; k < backbone_grads.size(); ++k)
      backbone_grads[k].match(model.backbone.layers[k]);
    if (update_backbone) {
      move_table_grads.resize(dataset::kLabelSpace, kContextDim);
      value_grads.match(model.value_head);
      backbone_states.resize(2 * model.backbone.layers.size());
    }
    embedding_grads.assign(kEmbedDim, 0.0);
  }

  // One mini-batch of forward + backward + Adam. Returns the mean batch loss.
  double step(const std::vector<const dataset::StateActionPair*>& batch) {
    const double loss = forward_backward(batch);
    apply_adam();
    return loss;
  }

  // Forward + backward only; fills the gradient tensors without updating
  // parameters (used by training via step() and by gradient checking).
  double forward_backward(const std::vector<const dataset::StateActionPair*>& batch) {
    const size_t n = batch.size();
    nn::Matrix x(n, kInputDim);
    std::vector<double> combined(kEmbedDim);
    for (size_t i = 0; i < n; ++i) {
      if (population_offsets.empty()) {
        fill_input_row(x.row(i), batch[i]->position, embedding);
      } else {
        auto it = population_offsets.find(batch[i]->player_id);
        for (size_t j = 0; j < kEmbedDim; ++j)
          combined[j] = embedding[j] +
                        (it != population_offsets.end() ? it->second[j] : 0.0);
        fill_input_row(x.row(i), batch[i]->position, combined);
      }
    }

    std::vector<nn::Matrix> acts;
    model.backbone.forward(x, acts);
    const nn::Matrix& context = acts.back();

    for (auto& g : backbone_grads) {
      g.dw.zero();
      std::fill(g.db.begin(), g.db.end(), 0.0);
    }
    if (update_backbone) {
      move_table_grads.zero();
      value_grads.dw.zero();
      std::fill(value_grads.db.begin(), value_grads.db.end(), 0.0);
    }

    nn::Matrix d_context(n, kContextDim);
    double loss = 0.0;
    const double inv_n = 1.0 / double(n);

    for (size_t i = 0; i < n; ++i) {
      const auto legal = chess::legal_moves(batch[i]->state);
      std::vector<double> logits(legal.size());
      size_t target = legal.size();
      for (size_t k = 0; k < legal.size(); ++k) {
        const double* row = model.move_table.row(dataset::move_label(legal[k]));
        double acc = 0.0;
        const double* ctx = context.row(i);
        for (size_t j = 0; j < kContextDim; ++j) acc += ctx[j] * row[j];
        logits[k] = acc;
        if (legal[k] == batch[i]->played) target = k;
      }
      if (target == legal.size())
        throw DataError("training pair's move is not legal in its state");

      auto ce = nn::masked_cross_entropy_compact(logits, target);
      loss += ce.loss * inv_n;
      double* dctx = d_context.row(i);
      for (size_t k = 0; k < legal.size(); ++k) {
        const double g = ce.grad[k] * inv_n;
        if (g == 0.0) continue;
        const size_t label = dataset::move_label(legal[k]);
        const double* row = model.move_table.row(label);
        for (size_t j = 0; j < kContextDim; ++j) dctx[j] += g * row[j];
        if (update_backbone) {
          double* drow = move_table_grads.row(label);
          const double* ctx = context.row(i);
          for (size_t j = 0; j < kContextDim; ++j) drow[j] += g * ctx[j];
        }
      }
    }

    if (with_value_loss) {
      nn::Matrix v;
      model.value_head.forward(context, v);
      for (size_t i = 0; i < n; ++i) {
        const double diff = v.at(i, 0) - batch[i]->outcome;
        loss += diff * diff * inv_n;
        const double dv = 2.0 * diff * inv_n;
        const double dz = dv * (1.0 - v.at(i, 0) * v.at(i, 0));
        if (update_backbone) {
          const double* ctx = context.row(i);
          double* dw = value_grads.dw.row(0);
          for (size_t j = 0; j < kContextDim; ++j) dw[j] += dz * ctx[j];
          value_grads.db[0] += dz;
        }
        const double* wv = model.value_head.w.row(0);
        double* dctx = d_context.row(i);
        for (size_t j = 0; j < kContextDim; ++j) dctx[j] += dz * wv[j];
      }
    }

    nn::Matrix d_input;
    model.backbone.backward(acts, std::move(d_context), backbone_grads, &d_input);

    std::fill(embedding_grads.begin(), embedding_grads.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double* di = d_input.row(i);
      for (size_t j = 0; j < kEmbedDim; ++j)
        embedding_grads[j] += di[chess::EncodedPosition::kSize + j];
    }
    return loss;
  }

  void apply_adam() {
    if (update_backbone) {
      for (size_t k = 0; k < model.backbone.layers.size(); ++k) {
        auto& layer = model.backbone.layers[k];
        nn::adam_step(layer.w.data, backbone_grads[k].dw.data, backbone_states[2 * k], hp);
        nn::adam_step(layer.b, backbone_grads[k].db, backbone_states[2 * k + 1], hp);
        layer.sync_transpose();
      }
      nn::adam_step(model.move_table.data, move_table_grads.data, move_table_state, hp);
      nn::adam_step(model.value_head.w.data, value_grads.dw.data, value_w_state, hp);
      nn::adam_step(model.value_head.b, value_grads.db, value_b_state, hp);
      model.value_head.sync_transpose();
    }
    nn::adam_step(embedding, embedding_grads, embedding_state, hp);
  }
};

inline std::vector<double> run_epochs(Trainer& trainer,
                                      const std::vector<dataset::StateActionPair>& pairs,
                                      const TrainConfig& config) {
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(config.seed, "batch-order"));

  std::vector<double> epoch_losses;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t begin = 0; begin < order.size(); begin += config.batch) {
      const size_t end = std::min(order.size(), begin + config.batch);
      std::vector<const dataset::StateActionPair*> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) batch.push_back(&pairs[order[i]]);
      loss_sum += trainer.step(batch);
      ++batches;
    }
    epoch_losses.push_back(loss_sum / double(batches));
  }
  return epoch_losses;
}

}  // namespace detail

struct PretrainResult {
  PolicyModel model;
  std::vector<double> epoch_losses;
};

// Joint training of backbone, move table, value head, and the generic
// embedding on pooled pairs. Loss = masked cross-entropy on the played move
// plus squared error of the value head against the game outcome.
inline PretrainResult pretrain_backbone(const std::vector<dataset::StateActionPair>& pairs,
                                        const TrainConfig& config) {
  if (pairs.empty()) throw DataError("pretrain_backbone: empty dataset");
  config.validate();
  PretrainResult out;
  out.model.init(derive_seed(config.seed, "init"));
  detail::Trainer trainer(out.model, out.model.generic_embedding, /*backbone=*/true,
                          /*value_loss=*/true, config.lr);
  for (const auto& p : pairs) {
    if (trainer.population_offsets.count(p.player_id)) continue;
    Rng rng(derive_seed(config.seed, "population-offset/" + p.player_id));
    std::vector<double> offset(kEmbedDim);
    for (double& v : offset) v = rng.next_uniform(-kPopulationOffsetScale, kPopulationOffsetScale);
    trainer.population_offsets.emplace(p.player_id, std::move(offset));
  }
  // Center the offsets so the generic embedding stays the population
  // centroid (and a single-player pool degenerates to no offset at all).
  if (!trainer.population_offsets.empty()) {
    std::vector<double> mean(kEmbedDim, 0.0);
    for (const auto& [_, offset] : trainer.population_offsets)
      for (size_t j = 0; j < kEmbedDim; ++j) mean[j] += offset[j];
    for (double& v : mean) v /= double(trainer.population_offsets.size());
    for (auto& [_, offset] : trainer.population_offsets)
      for (size_t j = 0; j < kEmbedDim; ++j) offset[j] -= mean[j];
  }
  out.epoch_losses = detail::run_epochs(trainer, pairs, config);
  return out;
}

struct FinetuneResult {
  PlayerEmbedding embedding;
  std::vector<double> epoch_losses;
};

// Embedding-only fine-tuning: starts from a copy of the generic embedding and
// updates exactly those 64 values; cross-entropy loss only.
inline FinetuneResult finetune_embedding(const PolicyModel& model,
                                         const std::string& player_id,
                                         const std::vector<dataset::StateActionPair>& pairs,
                                         const TrainConfig& config) {
  if (pairs.empty()) throw DataError("finetune_embedding: empty dataset for " + player_id);
  config.validate();
  FinetuneResult out;
  out.embedding.player_id = player_id;
  out.embedding.values = model.generic_embedding;
  out.embedding.provenance = config.epochs == 0 ? PlayerEmbedding::Provenance::GenericCopy
                                                : PlayerEmbedding::Provenance::FineTuned;
  // The backbone is frozen: cast away const for the Trainer view, but with
  // update_backbone=false no backbone/move-table/value-head byte changes.
  detail::Trainer trainer(const_cast<PolicyModel&>(model), out.embedding.values,
                          /*backbone=*/false, /*value_loss=*/false, config.lr);
  out.epoch_losses = detail::run_epochs(trainer, pairs, config);
  return out;
}

// Mean masked cross-entropy of the played moves under the given embedding.
inline double held_out_cross_entropy(const PolicyModel& model,
                                     std::span<const double> embedding,
                                     const std::vector<dataset::StateActionPair>& pairs) {
  if (pairs.empty()) throw DataError("held_out_cross_entropy: empty set");
  double total = 0.0;
  for (const auto& p : pairs) {
    Prediction pred = predict(model, embedding, p.state);
    for (size_t i = 0; i < pred.moves.size(); ++i)
      if (pred.moves[i] == p.played) {
        total += -std::log(std::max(pred.probs[i], 1e-300));
        break;
      }
  }
  return total / double(pairs.size());
}

}  // namespace stylebench::policy
