#include <doctest.h>

#include <cmath>
#include <random>

#include "apsense/common/error.hpp"
#include "apsense/nn/layers.hpp"
#include "apsense/nn/tensor.hpp"
#include "support/oracles.hpp"

using namespace apsense::nn;
using testsupport::central_diff;
using testsupport::grad_close;

namespace {

double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s;
}

}  // namespace

TEST_SUITE("nn_layers") {

TEST_CASE("tensor indexing, broadcasting products and concat") {
  Tensor t(2, 3, 2);
  t.at(1, 2, 1) = 5.0;
  CHECK(t.v[(1 * 2 + 1) * 3 + 2] == 5.0);  // plane-major layout
  CHECK(t.plane(1)[1 * 3 + 2] == 5.0);

  std::mt19937_64 rng(1);
  Tensor x(3, 4, 2);
  fill_uniform(x, rng, -1.0, 1.0);

  Tensor gate_c(1, 1, 2);
  gate_c.v = {2.0, -0.5};
  const Tensor xc = mul_per_channel(x, gate_c);
  CHECK(xc.at(2, 1, 0) == doctest::Approx(2.0 * x.at(2, 1, 0)));
  CHECK(xc.at(0, 3, 1) == doctest::Approx(-0.5 * x.at(0, 3, 1)));

  Tensor gate_p(3, 4, 1);
  fill_uniform(gate_p, rng, 0.0, 1.0);
  const Tensor xp = mul_per_pixel(x, gate_p);
  CHECK(xp.at(1, 2, 1) == doctest::Approx(gate_p.at(1, 2, 0) * x.at(1, 2, 1)));

  const Tensor cat = concat_channels(x, xc);
  CHECK(cat.c == 4);
  CHECK(cat.at(2, 3, 1) == x.at(2, 3, 1));
  CHECK(cat.at(2, 3, 3) == xc.at(2, 3, 1));

  const Tensor h = hadamard(x, xc);
  CHECK(h.at(1, 1, 0) == doctest::Approx(x.at(1, 1, 0) * xc.at(1, 1, 0)));
}

TEST_CASE("bilinear plane resize matches the independent oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (const auto [sh, sw, dh, dw] :
       {std::array<int, 4>{7, 5, 13, 11}, {8, 8, 4, 4}, {3, 9, 9, 3}, {5, 5, 5, 5}}) {
    std::vector<double> src(static_cast<std::size_t>(sh) * sw);
    for (auto& v : src) v = u(rng);
    std::vector<double> dst(static_cast<std::size_t>(dh) * dw);
    resize_bilinear_plane(src.data(), sh, sw, dst.data(), dh, dw);
    const auto want = testsupport::bilinear_oracle(src, sh, sw, dh, dw);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      CHECK(dst[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conv2d forward equals direct convolution") {
  std::mt19937_64 rng(3);
  Conv2d conv("c", 2, 3, 3);
  conv.init(rng);
  Tensor x(5, 4, 2);
  fill_uniform(x, rng, -1.0, 1.0);
  const Tensor y = conv.forward(x);
  REQUIRE(y.h == 5);
  REQUIRE(y.w == 4);
  REQUIRE(y.c == 3);
  const Tensor want = testsupport::naive_conv2d(x, conv.weight.w, conv.bias.w, 3, 3);
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    CHECK(y.v[i] == doctest::Approx(want.v[i]).epsilon(1e-12));
  }
}

TEST_CASE("conv2d gradients match finite differences") {
  std::mt19937_64 rng(4);
  Conv2d conv("c", 2, 2, 3);
  conv.init(rng);
  Tensor x(4, 5, 2);
  fill_uniform(x, rng, -1.0, 1.0);
  Tensor r(4, 5, 2);
  fill_uniform(r, rng, -1.0, 1.0);

  const auto loss = [&]() { return dot(conv.forward(x), r); };

  conv.forward(x);
  conv.weight.zero_grad();
  conv.bias.zero_grad();
  const Tensor dx = conv.backward(r);

  for (std::size_t i = 0; i < conv.weight.w.size(); i += 3) {
    CHECK(grad_close(conv.weight.g[i], central_diff(loss, conv.weight.w[i])));
  }
  for (std::size_t i = 0; i < conv.bias.w.size(); ++i) {
    CHECK(grad_close(conv.bias.g[i], central_diff(loss, conv.bias.w[i])));
  }
  for (std::size_t i = 0; i < x.v.size(); i += 4) {
    CHECK(grad_close(dx.v[i], central_diff(loss, x.v[i])));
  }
}

TEST_CASE("dense gradients match finite differences") {
  std::mt19937_64 rng(5);
  Dense fc("fc", 12, 3);
  fc.init(rng);
  Tensor x(2, 2, 3);
  fill_uniform(x, rng, -1.0, 1.0);
  Tensor r(1, 1, 3);
  fill_uniform(r, rng, -1.0, 1.0);

  const auto loss = [&]() { return dot(fc.forward(x), r); };

  fc.forward(x);
  fc.weight.zero_grad();
  fc.bias.zero_grad();
  const Tensor dx = fc.backward(r);

  for (std::size_t i = 0; i < fc.weight.w.size(); ++i) {
    CHECK(grad_close(fc.weight.g[i], central_diff(loss, fc.weight.w[i])));
  }
  for (std::size_t i = 0; i < fc.bias.w.size(); ++i) {
    CHECK(grad_close(fc.bias.g[i], central_diff(loss, fc.bias.w[i])));
  }
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    CHECK(grad_close(dx.v[i], central_diff(loss, x.v[i])));
  }
  CHECK_THROWS_AS(fc.forward(Tensor(3, 3, 3)), apsense::Error);  // size mismatch
}

TEST_CASE("batchnorm training mode normalizes per channel") {
  std::mt19937_64 rng(6);
  BatchNorm2d bn("bn", 3);
  Tensor x(6, 5, 3);
  fill_uniform(x, rng, -2.0, 3.0);
  const Tensor y = bn.forward(x, true);
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0, var = 0.0;
    for (int i = 0; i < 30; ++i) mean += y.plane(c)[i];
    mean /= 30.0;
    for (int i = 0; i < 30; ++i) var += (y.plane(c)[i] - mean) * (y.plane(c)[i] - mean);
    var /= 30.0;
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(var == doctest::Approx(1.0).epsilon(1e-3));  // epsilon in denominator
  }
}

TEST_CASE("batchnorm running statistics follow the momentum update") {
  std::mt19937_64 rng(7);
  BatchNorm2d bn("bn", 2, 0.1);
  Tensor x(4, 4, 2);
  fill_uniform(x, rng, -1.0, 2.0);
  double mean0 = 0.0, var0 = 0.0;
  for (int i = 0; i < 16; ++i) mean0 += x.plane(0)[i];
  mean0 /= 16.0;
  for (int i = 0; i < 16; ++i) var0 += (x.plane(0)[i] - mean0) * (x.plane(0)[i] - mean0);
  var0 /= 16.0;

  bn.forward(x, true);
  CHECK(bn.running_mean.w[0] == doctest::Approx(0.1 * mean0).epsilon(1e-12));
  CHECK(bn.running_var.w[0] == doctest::Approx(0.9 * 1.0 + 0.1 * var0).epsilon(1e-12));
  CHECK_FALSE(bn.running_mean.trainable);
  CHECK_FALSE(bn.running_var.trainable);
}

TEST_CASE("batchnorm eval mode applies the running affine transform") {
  BatchNorm2d bn("bn", 1);
  bn.running_mean.w[0] = 0.25;
  bn.running_var.w[0] = 4.0;
  bn.gamma.w[0] = 2.0;
  bn.beta.w[0] = -1.0;
  Tensor x(1, 2, 1);
  x.v = {0.25, 2.25};
  const Tensor y = bn.forward(x, false);
  const double eps = 1e-5;
  CHECK(y.v[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(y.v[1] == doctest::Approx(2.0 * (2.0 / std::sqrt(4.0 + eps)) - 1.0).epsilon(1e-9));
}

TEST_CASE("batchnorm gradients match finite differences in both modes") {
  for (const bool training : {true, false}) {
    CAPTURE(training);
    std::mt19937_64 rng(8);
    BatchNorm2d bn("bn", 2);
    // Non-trivial gamma/beta and running stats.
    bn.gamma.w = {1.3, 0.7};
    bn.beta.w = {0.2, -0.4};
    bn.running_mean.w = {0.1, -0.2};
    bn.running_var.w = {1.5, 0.8};
    Tensor x(3, 4, 2);
    fill_uniform(x, rng, -1.0, 1.0);
    Tensor r(3, 4, 2);
    fill_uniform(r, rng, -1.0, 1.0);

    // Training-mode forwards advance the running stats, but the output
    // of a training forward never reads them, so the loss is stable.
    const auto loss = [&]() { return dot(bn.forward(x, training), r); };

    bn.forward(x, training);
    bn.gamma.zero_grad();
    bn.beta.zero_grad();
    const Tensor dx = bn.backward(r);

    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(grad_close(bn.gamma.g[i], central_diff(loss, bn.gamma.w[i])));
      CHECK(grad_close(bn.beta.g[i], central_diff(loss, bn.beta.w[i])));
    }
    for (std::size_t i = 0; i < x.v.size(); ++i) {
      CHECK(grad_close(dx.v[i], central_diff(loss, x.v[i])));
    }
  }
}

TEST_CASE("relu and sigmoid forward values and gradients") {
  std::mt19937_64 rng(9);
  Tensor x(2, 3, 2);
  fill_uniform(x, rng, -2.0, 2.0);
  Tensor r(2, 3, 2);
  fill_uniform(r, rng, -1.0, 1.0);

  ReLU relu;
  const Tensor yr = relu.forward(x);
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    CHECK(yr.v[i] == std::max(0.0, x.v[i]));
  }
  const Tensor dxr = relu.backward(r);
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    CHECK(dxr.v[i] == (x.v[i] > 0.0 ? r.v[i] : 0.0));
  }

  Sigmoid sig;
  const auto loss = [&]() { return dot(sig.forward(x), r); };
  const Tensor ys = sig.forward(x);
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    CHECK(ys.v[i] == doctest::Approx(1.0 / (1.0 + std::exp(-x.v[i]))).epsilon(1e-12));
  }
  const Tensor dxs = sig.backward(r);
  for (std::size_t i = 0; i < x.v.size(); ++i) {
    CHECK(grad_close(dxs.v[i], central_diff(loss, x.v[i])));
  }
}

TEST_CASE("max pooling takes 2x2 maxima and routes gradients to argmax") {
  Tensor x(4, 4, 1);
  x.v = {1,  2,  5,  4,   //
         3,  0,  1,  2,   //
         9,  8,  0,  1,   //
         7,  6,  3, -2};
  MaxPool2d pool;
  const Tensor y = pool.forward(x);
  REQUIRE(y.h == 2);
  REQUIRE(y.w == 2);
  CHECK(y.v == std::vector<double>{3, 5, 9, 3});

  Tensor dy(2, 2, 1);
  dy.v = {10, 20, 30, 40};
  const Tensor dx = pool.backward(dy);
  CHECK(dx.at(1, 0, 0) == 10);  // 3
  CHECK(dx.at(0, 2, 0) == 20);  // 5
  CHECK(dx.at(2, 0, 0) == 30);  // 9
  CHECK(dx.at(3, 2, 0) == 40);  // 3
  CHECK(dx.at(0, 0, 0) == 0);

  // Odd trailing row/column is dropped.
  Tensor odd(5, 5, 1, 1.0);
  MaxPool2d pool2;
  const Tensor y2 = pool2.forward(odd);
  CHECK(y2.h == 2);
  CHECK(y2.w == 2);

  MaxPool2d pool3;
  CHECK_THROWS_AS(pool3.forward(Tensor(1, 4, 1)), apsense::Error);
}

TEST_CASE("global pools reduce to per-channel mean and max") {
  Tensor x(2, 2, 2);
  x.v = {1, 2, 3, 4,  /* ch1 */ -1, -5, 2, 0};
  GlobalAvgPool gap;
  const Tensor avg = gap.forward(x);
  REQUIRE(avg.c == 2);
  CHECK(avg.v[0] == doctest::Approx(2.5));
  CHECK(avg.v[1] == doctest::Approx(-1.0));
  Tensor d(1, 1, 2);
  d.v = {4.0, 8.0};
  const Tensor davg = gap.backward(d);
  CHECK(davg.at(0, 1, 0) == doctest::Approx(1.0));
  CHECK(davg.at(1, 1, 1) == doctest::Approx(2.0));

  GlobalMaxPool gmp;
  const Tensor mx = gmp.forward(x);
  CHECK(mx.v[0] == 4.0);
  CHECK(mx.v[1] == 2.0);
  const Tensor dmax = gmp.backward(d);
  CHECK(dmax.at(1, 1, 0) == 4.0);
  CHECK(dmax.at(1, 0, 1) == 8.0);
  CHECK(dmax.at(0, 0, 0) == 0.0);

  // Ties route to the first occurrence in raster order.
  Tensor tie(1, 3, 1);
  tie.v = {7.0, 7.0, 1.0};
  GlobalMaxPool gmp2;
  gmp2.forward(tie);
  Tensor d1(1, 1, 1);
  d1.v = {1.0};
  const Tensor dt = gmp2.backward(d1);
  CHECK(dt.v[0] == 1.0);
  CHECK(dt.v[1] == 0.0);
}

TEST_CASE("softmax is stable and cross-entropy gradient is p minus onehot") {
  const auto p = softmax({1000.0, 1001.0});
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-12));
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> logits = {0.3, -1.2, 2.0};
  std::vector<double> grad;
  const double loss = softmax_cross_entropy(logits, 2, &grad);
  const auto probs = softmax(logits);
  CHECK(loss == doctest::Approx(-std::log(probs[2])).epsilon(1e-12));
  REQUIRE(grad.size() == 3);
  CHECK(grad[0] == doctest::Approx(probs[0]).epsilon(1e-12));
  CHECK(grad[1] == doctest::Approx(probs[1]).epsilon(1e-12));
  CHECK(grad[2] == doctest::Approx(probs[2] - 1.0).epsilon(1e-12));

  // Finite-difference cross-check of the loss gradient.
  std::vector<double> l2 = logits;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto f = [&]() { return softmax_cross_entropy(l2, 2, nullptr); };
    CHECK(grad_close(grad[i], central_diff(f, l2[i])));
  }
}

}  // TEST_SUITE
