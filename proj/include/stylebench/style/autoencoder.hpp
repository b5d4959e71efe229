#pragma once

#include <string>
#include <vector>

#include "stylebench/nn/adam.hpp"
#include "stylebench/nn/layers.hpp"
#include "stylebench/nn/losses.hpp"
#include "stylebench/nn/serialize.hpp"
#include "stylebench/style/transition.hpp"

namespace stylebench::style {

struct AeConfig {
  double lr = 1e-3;
  size_t epochs = 10;
  size_t batch = 1024;
  uint64_t seed = 0;
};

// Symmetric dense autoencoder 2304 -> 1024 -> 512 -> 256 -> 128 and mirror,
// ReLU hidden, identity reconstruction output, MSE loss.
struct AutoEncoder {
  static constexpr size_t kInputDim = TransitionVector::kSize;  // 2304
  static constexpr size_t kLatentDim = 128;

  nn::Mlp encoder;
  nn::Mlp decoder;

  AutoEncoder()
      : encoder{nn::DenseLayer(2304, 1024, nn::Activation::Relu),
                nn::DenseLayer(1024, 512, nn::Activation::Relu),
                nn::DenseLayer(512, 256, nn::Activation::Relu),
                nn::DenseLayer(256, 128, nn::Activation::Relu)},
        decoder{nn::DenseLayer(128, 256, nn::Activation::Relu),
                nn::DenseLayer(256, 512, nn::Activation::Relu),
                nn::DenseLayer(512, 1024, nn::Activation::Relu),
                nn::DenseLayer(1024, 2304, nn::Activation::Identity)} {}

  void init(uint64_t seed) {
    Rng rng(seed);
    encoder.init(rng);
    decoder.init(rng);
  }
};

namespace detail {

inline void fill_transition_rows(nn::Matrix& x,
                                 const std::vector<const TransitionVector*>& batch) {
  x.resize(batch.size(), TransitionVector::kSize);
  for (size_t i = 0; i < batch.size(); ++i) {
    double* row = x.row(i);
    for (size_t j = 0; j < TransitionVector::kSize; ++j) row[j] = double(batch[i]->values[j]);
  }
}

}  // namespace detail

struct AeTrainResult {
  AutoEncoder ae;
  std::vector<double> epoch_mse;  // mean reconstruction MSE per epoch
};

inline AeTrainResult train_autoencoder(const std::vector<TransitionVector>& vectors,
                                       const AeConfig& config) {
  if (vectors.empty()) throw DataError("train_autoencoder: empty input");
  if (config.lr <= 0.0 || config.batch < 1) throw DataError("train_autoencoder: bad config");

  AeTrainResult out;
  out.ae.init(derive_seed(config.seed, "ae-init"));
  nn::Mlp& enc = out.ae.encoder;
  nn::Mlp& dec = out.ae.decoder;

  nn::AdamHyper hp;
  hp.lr = config.lr;
  std::vector<nn::AdamState> states(2 * (enc.layers.size() + dec.layers.size()));
  std::vector<nn::LayerGrads> enc_grads(enc.layers.size()), dec_grads(dec.layers.size());
  for (size_t k = 0; k < enc.layers.size(); ++k) enc_grads[k].match(enc.layers[k]);
  for (size_t k = 0; k < dec.layers.size(); ++k) dec_grads[k].match(dec.layers[k]);

  std::vector<size_t> order(vectors.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(config.seed, "ae-batch-order"));

  std::vector<nn::Matrix> enc_acts, dec_acts;
  nn::Matrix x;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double mse_sum = 0.0;
    size_t sample_count = 0;
    for (size_t begin = 0; begin < order.size(); begin += config.batch) {
      const size_t end = std::min(order.size(), begin + config.batch);
      std::vector<const TransitionVector*> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) batch.push_back(&vectors[order[i]]);
      detail::fill_transition_rows(x, batch);

      enc.forward(x, enc_acts);
      dec.forward(enc_acts.back(), dec_acts);
      const nn::Matrix& recon = dec_acts.back();

      const size_t n = batch.size();
      const double scale = 2.0 / (double(TransitionVector::kSize) * double(n));
      nn::Matrix d_out(n, TransitionVector::kSize);
      double batch_se = 0.0;
      for (size_t idx = 0; idx < recon.size(); ++idx) {
        const double diff = recon.data[idx] - x.data[idx];
        batch_se += diff * diff;
        d_out.data[idx] = diff * scale;
      }
      mse_sum += batch_se / double(TransitionVector::kSize);
      sample_count += n;

      for (auto* grads : {&enc_grads, &dec_grads})
        for (auto& g : *grads) {
          g.dw.zero();
          std::fill(g.db.begin(), g.db.end(), 0.0);
        }
      nn::Matrix d_latent;
      dec.backward(dec_acts, std::move(d_out), dec_grads, &d_latent);
      enc.backward(enc_acts, std::move(d_latent), enc_grads);

      size_t s = 0;
      for (auto pair : {std::make_pair(&enc, &enc_grads), std::make_pair(&dec, &dec_grads)}) {
        for (size_t k = 0; k < pair.first->layers.size(); ++k) {
          auto& layer = pair.first->layers[k];
          nn::adam_step(layer.w.data, (*pair.second)[k].dw.data, states[s++], hp);
          nn::adam_step(layer.b, (*pair.second)[k].db, states[s++], hp);
          layer.sync_transpose();
        }
      }
    }
    out.epoch_mse.push_back(mse_sum / double(sample_count));
  }
  return out;
}

// Encoder forward pass only.
inline std::vector<double> encode_latent(const AutoEncoder& ae, const TransitionVector& t) {
  nn::Matrix x(1, TransitionVector::kSize);
  for (size_t j = 0; j < TransitionVector::kSize; ++j) x.at(0, j) = double(t.values[j]);
  nn::Matrix latent = ae.encoder.forward(x);
  return latent.data;
}

inline nn::Matrix encode_latents(const AutoEncoder& ae,
                                 const std::vector<const TransitionVector*>& batch) {
  nn::Matrix x;
  detail::fill_transition_rows(x, batch);
  return ae.encoder.forward(x);
}

inline std::vector<nn::NamedTensor> autoencoder_tensors(const AutoEncoder& ae) {
  std::vector<nn::NamedTensor> tensors;
  auto dump = [&](const nn::Mlp& net, const std::string& prefix) {
    for (size_t k = 0; k < net.layers.size(); ++k) {
      const auto& layer = net.layers[k];
      tensors.push_back({prefix + "/layer" + std::to_string(k) + "/w",
                         {uint32_t(layer.out), uint32_t(layer.in)}, layer.w.data});
      tensors.push_back(
          {prefix + "/layer" + std::to_string(k) + "/b", {uint32_t(layer.out)}, layer.b});
    }
  };
  dump(ae.encoder, "encoder");
  dump(ae.decoder, "decoder");
  return tensors;
}

inline void save_autoencoder(const std::string& path, const AutoEncoder& ae) {
  nn::save_weights(path, autoencoder_tensors(ae));
}

inline AutoEncoder load_autoencoder(const std::string& path) {
  const auto tensors = nn::load_weights(path);
  AutoEncoder ae;
  auto fill = [&](nn::Mlp& net, const std::string& prefix) {
    for (size_t k = 0; k < net.layers.size(); ++k) {
      auto& layer = net.layers[k];
      const auto* w = nn::find_tensor(tensors, prefix + "/layer" + std::to_string(k) + "/w");
      const auto* b = nn::find_tensor(tensors, prefix + "/layer" + std::to_string(k) + "/b");
      if (!w || !b) throw DataError("autoencoder file missing tensors: " + path);
      if (w->values.size() != layer.w.size() || b->values.size() != layer.b.size())
        throw DataError("autoencoder tensor shape mismatch: " + path);
      layer.w.data = w->values;
      layer.b = b->values;
      layer.sync_transpose();
    }
  };
  fill(ae.encoder, "encoder");
  fill(ae.decoder, "decoder");
  return ae;
}

}  // namespace stylebench::style
