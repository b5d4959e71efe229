#include <catch2/catch.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "stylebench/nn/adam.hpp"
#include "stylebench/nn/gradcheck.hpp"
#include "stylebench/nn/layers.hpp"
#include "stylebench/nn/losses.hpp"
#include "stylebench/nn/serialize.hpp"

using namespace stylebench;
using namespace stylebench::nn;

TEST_CASE("adam: hand-evaluated single step") {
  // theta=0, g=1, lr=1e-3: m_hat = v_hat = 1, so the step is ~ -lr.
  std::vector<double> theta{0.0};
  std::vector<double> g{1.0};
  AdamState state(1);
  AdamHyper hp;
  hp.lr = 1e-3;
  adam_step(theta, g, state, hp);
  CHECK(state.t == 1);
  CHECK(std::abs(theta[0] - (-1e-3)) < 1e-9);

  adam_step(theta, g, state, hp);
  CHECK(std::abs(theta[0] - (-2e-3)) < 1e-6);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  std::vector<double> theta{0.5, -2.0, 3.25};
  const auto before = theta;
  std::vector<double> g{0.0, 0.0, 0.0};
  AdamState state(3);
  AdamHyper hp;
  for (int i = 0; i < 10; ++i) adam_step(theta, g, state, hp);
  CHECK(theta == before);
}

TEST_CASE("adam: shape mismatch is an error") {
  std::vector<double> theta{0.0};
  std::vector<double> g{1.0, 2.0};
  AdamState state(1);
  CHECK_THROWS_AS(adam_step(theta, g, state, AdamHyper{}), DataError);
}

TEST_CASE("masked cross entropy: uniform logits over 20 legal labels") {
  std::vector<double> logits(20, 0.7);
  auto r = masked_cross_entropy_compact(logits, 3);
  CHECK(r.loss == Approx(std::log(20.0)).epsilon(1e-12));
}

TEST_CASE("masked cross entropy: a single legal label has zero loss") {
  std::vector<double> logits{1.3};
  auto r = masked_cross_entropy_compact(logits, 0);
  CHECK(r.loss == Approx(0.0).margin(1e-12));
  CHECK(r.grad[0] == Approx(0.0).margin(1e-12));
}

TEST_CASE("masked cross entropy: gradient sums to zero and is zero off the legal set") {
  std::vector<double> logits_by_label(50, 0.0);
  for (size_t i = 0; i < logits_by_label.size(); ++i) logits_by_label[i] = 0.01 * double(i);
  std::vector<int> legal{3, 11, 17, 42};
  auto r = masked_cross_entropy(logits_by_label, legal, 17);
  double sum = std::accumulate(r.grad.begin(), r.grad.end(), 0.0);
  CHECK(sum == Approx(0.0).margin(1e-12));
  for (size_t i = 0; i < r.grad.size(); ++i) {
    if (std::find(legal.begin(), legal.end(), int(i)) == legal.end())
      CHECK(r.grad[i] == 0.0);
  }
  CHECK_THROWS_AS(masked_cross_entropy(logits_by_label, legal, 5), DataError);
}

TEST_CASE("single linear layer + MSE matches the closed-form gradient") {
  // loss = mean_o (Wx - y)_o^2 ; dL/dW = (2/out) (Wx - y) x^T
  Rng rng(11);
  DenseLayer layer(4, 3, Activation::Identity);
  layer.init(rng);
  Matrix x(1, 4);
  for (size_t j = 0; j < 4; ++j) x.at(0, j) = rng.next_uniform(-1, 1);
  std::vector<double> y{0.25, -0.5, 1.0};

  Mlp net{layer};
  std::vector<Matrix> acts;
  net.forward(x, acts);
  const Matrix& pred = acts.back();

  Matrix d_out(1, 3);
  std::vector<double> grad_buf(3);
  mse(std::span<const double>(pred.row(0), 3), y, grad_buf);
  for (size_t o = 0; o < 3; ++o) d_out.at(0, o) = grad_buf[o];

  std::vector<LayerGrads> grads;
  net.backward(acts, d_out, grads);

  for (size_t o = 0; o < 3; ++o) {
    const double residual = pred.at(0, o) - y[o];
    for (size_t j = 0; j < 4; ++j) {
      const double closed_form = 2.0 / 3.0 * residual * x.at(0, j);
      CHECK(grads[0].dw.at(o, j) == Approx(closed_form).epsilon(1e-12));
    }
    CHECK(grads[0].db[o] == Approx(2.0 / 3.0 * residual).epsilon(1e-12));
  }
}

namespace {

// Small random regression net wired up for gradient checking.
struct CheckableNet {
  Mlp net;
  Matrix x;
  std::vector<double> y;
  std::vector<LayerGrads> grads;

  CheckableNet(uint64_t seed, Activation hidden_act) {
    Rng rng(seed);
    net = Mlp{DenseLayer(6, 8, hidden_act), DenseLayer(8, 5, hidden_act),
              DenseLayer(5, 3, Activation::Identity)};
    net.init(rng);
    x.resize(2, 6);
    for (double& v : x.data) v = rng.next_uniform(-1, 1);
    y.resize(2 * 3);
    for (double& v : y) v = rng.next_uniform(-1, 1);
  }

  void sync() {
    for (auto& layer : net.layers) layer.sync_transpose();
  }

  double loss() {
    sync();
    Matrix out = net.forward(x);
    double total = 0.0;
    std::vector<double> grad_buf(out.cols);
    for (size_t i = 0; i < out.rows; ++i)
      total += mse(std::span<const double>(out.row(i), out.cols),
                   std::span<const double>(y.data() + i * out.cols, out.cols), grad_buf);
    return total / double(out.rows);
  }

  void backward() {
    sync();
    std::vector<Matrix> acts;
    net.forward(x, acts);
    Matrix d_out(acts.back().rows, acts.back().cols);
    std::vector<double> grad_buf(d_out.cols);
    for (size_t i = 0; i < d_out.rows; ++i) {
      mse(std::span<const double>(acts.back().row(i), d_out.cols),
          std::span<const double>(y.data() + i * d_out.cols, d_out.cols), grad_buf);
      for (size_t o = 0; o < d_out.cols; ++o)
        d_out.at(i, o) = grad_buf[o] / double(d_out.rows);
    }
    for (auto& g : grads) {
      g.dw.zero();
      std::fill(g.db.begin(), g.db.end(), 0.0);
    }
    net.backward(acts, std::move(d_out), grads);
  }

  GradCheckTarget target() {
    GradCheckTarget t;
    t.loss = [this] { return loss(); };
    t.backward = [this] { backward(); };
    backward();  // allocate grads
    for (size_t k = 0; k < net.layers.size(); ++k) {
      t.params.emplace_back(net.layers[k].w.data);
      t.params.emplace_back(net.layers[k].b);
      t.grads.emplace_back(grads[k].dw.data);
      t.grads.emplace_back(grads[k].db);
    }
    return t;
  }
};

}  // namespace

TEST_CASE("gradient check: random dense nets stay under 1e-4") {
  for (auto act : {Activation::Relu, Activation::Tanh}) {
    CheckableNet model(17, act);
    auto target = model.target();
    double err = gradient_check(target, 120, 1e-5, 99);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("gradient check: identity net at the loss minimum has zero gradient") {
  Mlp net{DenseLayer(3, 3, Activation::Identity)};
  for (size_t i = 0; i < 3; ++i) net.layers[0].w.at(i, i) = 1.0;
  net.layers[0].sync_transpose();
  Matrix x(1, 3);
  x.at(0, 0) = 0.3;
  x.at(0, 1) = -0.7;
  x.at(0, 2) = 0.1;
  Matrix out = net.forward(x);
  std::vector<double> grad_buf(3);
  double loss = mse(std::span<const double>(out.row(0), 3),
                    std::span<const double>(x.row(0), 3), grad_buf);
  CHECK(loss == Approx(0.0).margin(1e-15));
  for (double g : grad_buf) CHECK(g == Approx(0.0).margin(1e-15));
}

TEST_CASE("training is deterministic under a fixed seed") {
  auto run = [] {
    CheckableNet model(5, Activation::Relu);
    AdamHyper hp;
    hp.lr = 1e-3;
    std::vector<AdamState> states(model.net.layers.size() * 2);
    for (int step = 0; step < 25; ++step) {
      model.backward();
      for (size_t k = 0; k < model.net.layers.size(); ++k) {
        adam_step(model.net.layers[k].w.data, model.grads[k].dw.data, states[2 * k], hp);
        adam_step(model.net.layers[k].b, model.grads[k].db, states[2 * k + 1], hp);
      }
    }
    std::vector<double> flat;
    for (const auto& layer : model.net.layers)
      flat.insert(flat.end(), layer.w.data.begin(), layer.w.data.end());
    return flat;
  };
  CHECK(run() == run());
}

TEST_CASE("parameters stay finite while training on finite data") {
  CheckableNet model(23, Activation::Relu);
  AdamHyper hp;
  hp.lr = 1e-2;
  std::vector<AdamState> states(model.net.layers.size() * 2);
  for (int step = 0; step < 200; ++step) {
    model.backward();
    for (size_t k = 0; k < model.net.layers.size(); ++k) {
      adam_step(model.net.layers[k].w.data, model.grads[k].dw.data, states[2 * k], hp);
      adam_step(model.net.layers[k].b, model.grads[k].db, states[2 * k + 1], hp);
    }
  }
  for (const auto& layer : model.net.layers)
    for (double v : layer.w.data) REQUIRE(std::isfinite(v));
}

TEST_CASE("weight file round trip preserves names, dims, and f32 payload") {
  std::vector<NamedTensor> tensors;
  tensors.push_back({"backbone/w1", {3, 4}, std::vector<double>(12, 0.0)});
  tensors.push_back({"embedding/player-a", {8}, std::vector<double>(8, 0.0)});
  Rng rng(3);
  for (auto& t : tensors)
    for (double& v : t.values) v = double(float(rng.next_uniform(-2, 2)));

  const std::string path = "/tmp/stylebench_test_weights.sbw";
  save_weights(path, tensors);
  auto loaded = load_weights(path);
  REQUIRE(loaded.size() == tensors.size());
  for (size_t i = 0; i < tensors.size(); ++i) {
    CHECK(loaded[i].name == tensors[i].name);
    CHECK(loaded[i].dims == tensors[i].dims);
    CHECK(loaded[i].values == tensors[i].values);  // values were f32-exact
  }
  CHECK(find_tensor(loaded, "embedding/player-a") != nullptr);
  CHECK(find_tensor(loaded, "missing") == nullptr);
}
