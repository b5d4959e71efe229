#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stylebench/nn/tensor.hpp"
#include "stylebench/util/errors.hpp"
#include "stylebench/util/rng.hpp"

namespace stylebench::nn {

enum class Activation { Relu, Tanh, Identity };

inline void apply_activation(Activation act, Matrix& z) {
  switch (act) {
    case Activation::Relu:
      for (double& v : z.data)
        if (v < 0.0) v = 0.0;
      break;
    case Activation::Tanh:
      for (double& v : z.data) v = std::tanh(v);
      break;
    case Activation::Identity: break;
  }
}

// Derivative expressed through the activation OUTPUT a (valid for all three).
inline double activation_grad_from_output(Activation act, double a) {
  switch (act) {
    case Activation::Relu: return a > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: return 1.0 - a * a;
    default: return 1.0;
  }
}

struct DenseLayer {
  size_t in = 0;
  size_t out = 0;
  Activation act = Activation::Identity;
  Matrix w;                // out x in
  Matrix wt;               // in x out, kept in sync for the forward pass
  std::vector<double> b;   // out

  DenseLayer() = default;
  DenseLayer(size_t in_dim, size_t out_dim, Activation a)
      : in(in_dim), out(out_dim), act(a), w(out_dim, in_dim), b(out_dim, 0.0) {
    transpose_into(w, wt);
  }

  // He-uniform for relu, Xavier-uniform otherwise; fill order is row-major
  // over w so initialization is seed-reproducible.
  void init(Rng& rng) {
    const double limit = act == Activation::Relu ? std::sqrt(6.0 / double(in))
                                                 : std::sqrt(6.0 / double(in + out));
    for (double& v : w.data) v = rng.next_uniform(-limit, limit);
    std::fill(b.begin(), b.end(), 0.0);
    transpose_into(w, wt);
  }

  void sync_transpose() { transpose_into(w, wt); }

  // a = act(x * w^T + b)
  void forward(const Matrix& x, Matrix& a) const {
    linear_forward(x, wt, b, a);
    apply_activation(act, a);
  }
};

struct LayerGrads {
  Matrix dw;
  std::vector<double> db;
  void match(const DenseLayer& layer) {
    dw.resize(layer.out, layer.in);
    db.assign(layer.out, 0.0);
  }
};

// Plain sequential stack of dense layers.
struct Mlp {
  std::vector<DenseLayer> layers;

  Mlp() = default;
  Mlp(std::initializer_list<DenseLayer> ls) : layers(ls) {}

  size_t input_dim() const { return layers.front().in; }
  size_t output_dim() const { return layers.back().out; }

  void init(Rng& rng) {
    for (auto& layer : layers) layer.init(rng);
  }

  // acts[0] = x, acts[k+1] = output of layer k.
  void forward(const Matrix& x, std::vector<Matrix>& acts) const {
    acts.resize(layers.size() + 1);
    acts[0] = x;
    for (size_t k = 0; k < layers.size(); ++k) layers[k].forward(acts[k], acts[k + 1]);
  }

  Matrix forward(const Matrix& x) const {
    Matrix cur = x, next;
    for (const auto& layer : layers) {
      layer.forward(cur, next);
      std::swap(cur, next);
    }
    return cur;
  }

  // Backpropagates d_out (gradient w.r.t. the final activation), accumulating
  // parameter grads; optionally produces the gradient w.r.t. the input.
  void backward(const std::vector<Matrix>& acts, Matrix d_out, std::vector<LayerGrads>& grads,
                Matrix* d_input = nullptr) const {
    if (grads.size() != layers.size()) {
      grads.resize(layers.size());
      for (size_t k = 0; k < layers.size(); ++k) grads[k].match(layers[k]);
    }
    Matrix d_cur = std::move(d_out), d_prev;
    for (size_t k = layers.size(); k-- > 0;) {
      const Matrix& a = acts[k + 1];
      for (size_t idx = 0; idx < d_cur.size(); ++idx)
        d_cur.data[idx] *= activation_grad_from_output(layers[k].act, a.data[idx]);
      linear_backward_params(d_cur, acts[k], grads[k].dw, grads[k].db);
      if (k > 0 || d_input) {
        linear_backward_input(d_cur, layers[k].w, d_prev);
        std::swap(d_cur, d_prev);
      }
    }
    if (d_input) *d_input = std::move(d_cur);
  }
};

}  // namespace stylebench::nn
