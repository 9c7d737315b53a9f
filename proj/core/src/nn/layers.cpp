#include "apsense/nn/layers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "apsense/common/error.hpp"

namespace apsense::nn {
namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ColMat = Eigen::MatrixXd;

double xavier_limit(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

void init_param(Param& p, std::mt19937_64& rng, double limit) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& x : p.w) x = dist(rng);
}

}  // namespace

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int ksize)
    : weight(name + ".weight",
             static_cast<std::size_t>(out_ch) * in_ch * ksize * ksize),
      bias(name + ".bias", static_cast<std::size_t>(out_ch)),
      in_ch_(in_ch),
      out_ch_(out_ch),
      k_(ksize),
      pad_(ksize / 2) {
  if (in_ch < 1 || out_ch < 1 || ksize < 1)
    fail_config("convolution dimensions must be positive");
}

void Conv2d::init(std::mt19937_64& rng) {
  init_param(weight, rng, xavier_limit(in_ch_ * k_ * k_, out_ch_ * k_ * k_));
  std::fill(bias.w.begin(), bias.w.end(), 0.0);
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.c != in_ch_) fail_input("convolution input channel mismatch");
  in_h_ = x.h;
  in_w_ = x.w;
  const int rows = in_ch_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(x.h) * x.w;
  cols_.assign(static_cast<std::size_t>(rows) * n, 0.0);

  for (int oy = 0; oy < x.h; ++oy) {
    for (int ox = 0; ox < x.w; ++ox) {
      const std::size_t col = static_cast<std::size_t>(oy) * x.w + ox;
      double* dst = cols_.data() + col * rows;
      for (int ci = 0; ci < in_ch_; ++ci) {
        const double* src = x.plane(ci);
        for (int ky = 0; ky < k_; ++ky) {
          const int iy = oy + ky - pad_;
          for (int kx = 0; kx < k_; ++kx) {
            const int ix = ox + kx - pad_;
            const int row = (ci * k_ + ky) * k_ + kx;
            if (iy >= 0 && iy < x.h && ix >= 0 && ix < x.w)
              dst[row] = src[iy * x.w + ix];
          }
        }
      }
    }
  }

  Tensor y(x.h, x.w, out_ch_);
  Eigen::Map<const RowMat> wm(weight.w.data(), out_ch_, rows);
  Eigen::Map<const ColMat> cm(cols_.data(), rows, static_cast<Eigen::Index>(n));
  Eigen::Map<RowMat> ym(y.v.data(), out_ch_, static_cast<Eigen::Index>(n));
  ym.noalias() = wm * cm;
  for (int o = 0; o < out_ch_; ++o) ym.row(o).array() += bias.w[o];
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  if (dy.c != out_ch_ || dy.h != in_h_ || dy.w != in_w_)
    fail_input("convolution backward shape mismatch");
  const int rows = in_ch_ * k_ * k_;
  const std::size_t n = static_cast<std::size_t>(in_h_) * in_w_;

  Eigen::Map<const RowMat> dym(dy.v.data(), out_ch_, static_cast<Eigen::Index>(n));
  Eigen::Map<const ColMat> cm(cols_.data(), rows, static_cast<Eigen::Index>(n));
  Eigen::Map<RowMat> dwm(weight.g.data(), out_ch_, rows);
  dwm.noalias() += dym * cm.transpose();
  for (int o = 0; o < out_ch_; ++o) bias.g[o] += dym.row(o).sum();

  Eigen::Map<const RowMat> wm(weight.w.data(), out_ch_, rows);
  ColMat dcols = wm.transpose() * dym;

  Tensor dx(in_h_, in_w_, in_ch_);
  for (int oy = 0; oy < in_h_; ++oy) {
    for (int ox = 0; ox < in_w_; ++ox) {
      const Eigen::Index col = static_cast<Eigen::Index>(oy) * in_w_ + ox;
      for (int ci = 0; ci < in_ch_; ++ci) {
        double* dst = dx.plane(ci);
        for (int ky = 0; ky < k_; ++ky) {
          const int iy = oy + ky - pad_;
          if (iy < 0 || iy >= in_h_) continue;
          for (int kx = 0; kx < k_; ++kx) {
            const int ix = ox + kx - pad_;
            if (ix < 0 || ix >= in_w_) continue;
            const int row = (ci * k_ + ky) * k_ + kx;
            dst[iy * in_w_ + ix] += dcols(row, col);
          }
        }
      }
    }
  }
  return dx;
}

void Conv2d::collect(std::vector<Param*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

Dense::Dense(std::string name, int in_features, int out_features)
    : weight(name + ".weight",
             static_cast<std::size_t>(out_features) * in_features),
      bias(name + ".bias", static_cast<std::size_t>(out_features)),
      in_(in_features),
      out_(out_features) {
  if (in_features < 1 || out_features < 1)
    fail_config("dense layer dimensions must be positive");
}

void Dense::init(std::mt19937_64& rng) {
  init_param(weight, rng, xavier_limit(in_, out_));
  std::fill(bias.w.begin(), bias.w.end(), 0.0);
}

Tensor Dense::forward(const Tensor& x) {
  if (static_cast<int>(x.size()) != in_)
    fail_input("dense layer input size mismatch");
  x_ = x;
  Tensor y(1, 1, out_);
  Eigen::Map<const RowMat> wm(weight.w.data(), out_, in_);
  Eigen::Map<const Eigen::VectorXd> xv(x.v.data(), in_);
  Eigen::Map<Eigen::VectorXd> yv(y.v.data(), out_);
  yv.noalias() = wm * xv;
  for (int o = 0; o < out_; ++o) yv[o] += bias.w[o];
  return y;
}

Tensor Dense::backward(const Tensor& dy) {
  if (static_cast<int>(dy.size()) != out_)
    fail_input("dense layer backward size mismatch");
  Eigen::Map<const Eigen::VectorXd> dyv(dy.v.data(), out_);
  Eigen::Map<const Eigen::VectorXd> xv(x_.v.data(), in_);
  Eigen::Map<RowMat> dwm(weight.g.data(), out_, in_);
  dwm.noalias() += dyv * xv.transpose();
  for (int o = 0; o < out_; ++o) bias.g[o] += dyv[o];

  Tensor dx = Tensor::zeros_like(x_);
  Eigen::Map<const RowMat> wm(weight.w.data(), out_, in_);
  Eigen::Map<Eigen::VectorXd> dxv(dx.v.data(), in_);
  dxv.noalias() = wm.transpose() * dyv;
  return dx;
}

void Dense::collect(std::vector<Param*>& out) {
  out.push_back(&weight);
  out.push_back(&bias);
}

BatchNorm2d::BatchNorm2d(std::string name, int channels, double momentum,
                         double epsilon)
    : gamma(name + ".gamma", static_cast<std::size_t>(channels)),
      beta(name + ".beta", static_cast<std::size_t>(channels)),
      running_mean(name + ".running_mean", static_cast<std::size_t>(channels),
                   false),
      running_var(name + ".running_var", static_cast<std::size_t>(channels),
                  false),
      channels_(channels),
      momentum_(momentum),
      eps_(epsilon) {
  if (channels < 1) fail_config("batchnorm channel count must be positive");
  std::fill(gamma.w.begin(), gamma.w.end(), 1.0);
  std::fill(running_var.w.begin(), running_var.w.end(), 1.0);
}

Tensor BatchNorm2d::forward(const Tensor& x, bool training) {
  if (x.c != channels_) fail_input("batchnorm channel mismatch");
  x_ = x;
  last_training_ = training;
  mean_.assign(channels_, 0.0);
  var_.assign(channels_, 0.0);
  const std::size_t n = static_cast<std::size_t>(x.h) * x.w;

  if (training) {
    for (int ch = 0; ch < channels_; ++ch) {
      const double* p = x.plane(ch);
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += p[i];
      m /= static_cast<double>(n);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = p[i] - m;
        v += d * d;
      }
      v /= static_cast<double>(n);
      mean_[ch] = m;
      var_[ch] = v;
      running_mean.w[ch] = (1.0 - momentum_) * running_mean.w[ch] + momentum_ * m;
      running_var.w[ch] = (1.0 - momentum_) * running_var.w[ch] + momentum_ * v;
    }
  } else {
    for (int ch = 0; ch < channels_; ++ch) {
      mean_[ch] = running_mean.w[ch];
      var_[ch] = running_var.w[ch];
    }
  }

  Tensor y = Tensor::zeros_like(x);
  for (int ch = 0; ch < channels_; ++ch) {
    const double inv = 1.0 / std::sqrt(var_[ch] + eps_);
    const double* p = x.plane(ch);
    double* q = y.plane(ch);
    for (std::size_t i = 0; i < n; ++i)
      q[i] = gamma.w[ch] * (p[i] - mean_[ch]) * inv + beta.w[ch];
  }
  return y;
}

Tensor BatchNorm2d::backward(const Tensor& dy) {
  if (!dy.same_shape(x_)) fail_input("batchnorm backward shape mismatch");
  const std::size_t n = static_cast<std::size_t>(x_.h) * x_.w;
  const double dn = static_cast<double>(n);
  Tensor dx = Tensor::zeros_like(x_);

  for (int ch = 0; ch < channels_; ++ch) {
    const double inv = 1.0 / std::sqrt(var_[ch] + eps_);
    const double* p = x_.plane(ch);
    const double* d = dy.plane(ch);
    double* o = dx.plane(ch);

    double dgamma = 0.0, dbeta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dgamma += d[i] * (p[i] - mean_[ch]) * inv;
      dbeta += d[i];
    }
    gamma.g[ch] += dgamma;
    beta.g[ch] += dbeta;

    if (!last_training_) {
      const double scale = gamma.w[ch] * inv;
      for (std::size_t i = 0; i < n; ++i) o[i] = d[i] * scale;
      continue;
    }

    // Backward through the sample statistics themselves.
    double dvar = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      dvar += d[i] * gamma.w[ch] * (p[i] - mean_[ch]);
    dvar *= -0.5 * inv * inv * inv;

    double dmean = 0.0;
    double dsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dmean += d[i] * gamma.w[ch];
      dsum += p[i] - mean_[ch];
    }
    dmean = -dmean * inv + dvar * (-2.0 / dn) * dsum;

    for (std::size_t i = 0; i < n; ++i)
      o[i] = d[i] * gamma.w[ch] * inv + dvar * 2.0 * (p[i] - mean_[ch]) / dn +
             dmean / dn;
  }
  return dx;
}

void BatchNorm2d::collect(std::vector<Param*>& out) {
  out.push_back(&gamma);
  out.push_back(&beta);
  out.push_back(&running_mean);
  out.push_back(&running_var);
}

Tensor ReLU::forward(const Tensor& x) {
  x_ = x;
  Tensor y = x;
  for (double& v : y.v) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor ReLU::backward(const Tensor& dy) const {
  if (!dy.same_shape(x_)) fail_input("relu backward shape mismatch");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.v.size(); ++i)
    if (x_.v[i] <= 0.0) dx.v[i] = 0.0;
  return dx;
}

Tensor Sigmoid::forward(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.v) v = 1.0 / (1.0 + std::exp(-v));
  y_ = y;
  return y;
}

Tensor Sigmoid::backward(const Tensor& dy) const {
  if (!dy.same_shape(y_)) fail_input("sigmoid backward shape mismatch");
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.v.size(); ++i)
    dx.v[i] *= y_.v[i] * (1.0 - y_.v[i]);
  return dx;
}

Tensor MaxPool2d::forward(const Tensor& x) {
  in_h_ = x.h;
  in_w_ = x.w;
  c_ = x.c;
  const int oh = x.h / 2;
  const int ow = x.w / 2;
  if (oh < 1 || ow < 1) fail_input("max pool input too small");
  Tensor y(oh, ow, x.c);
  argmax_.assign(y.size(), 0);
  for (int ch = 0; ch < x.c; ++ch) {
    const double* p = x.plane(ch);
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        int best_idx = 0;
        for (int ky = 0; ky < 2; ++ky) {
          for (int kx = 0; kx < 2; ++kx) {
            const int idx = (oy * 2 + ky) * x.w + (ox * 2 + kx);
            if (p[idx] > best) {
              best = p[idx];
              best_idx = idx;
            }
          }
        }
        const std::size_t out_idx =
            (static_cast<std::size_t>(ch) * oh + oy) * ow + ox;
        y.v[out_idx] = best;
        argmax_[out_idx] = best_idx;
      }
    }
  }
  return y;
}

Tensor MaxPool2d::backward(const Tensor& dy) const {
  if (dy.c != c_ || dy.h != in_h_ / 2 || dy.w != in_w_ / 2)
    fail_input("max pool backward shape mismatch");
  Tensor dx(in_h_, in_w_, c_);
  const std::size_t plane = static_cast<std::size_t>(dy.h) * dy.w;
  for (int ch = 0; ch < c_; ++ch) {
    double* dst = dx.plane(ch);
    for (std::size_t i = 0; i < plane; ++i) {
      const std::size_t out_idx = static_cast<std::size_t>(ch) * plane + i;
      dst[argmax_[out_idx]] += dy.v[out_idx];
    }
  }
  return dx;
}

Tensor GlobalAvgPool::forward(const Tensor& x) {
  h_ = x.h;
  w_ = x.w;
  c_ = x.c;
  Tensor y(1, 1, x.c);
  const std::size_t n = static_cast<std::size_t>(x.h) * x.w;
  for (int ch = 0; ch < x.c; ++ch) {
    const double* p = x.plane(ch);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    y.v[ch] = s / static_cast<double>(n);
  }
  return y;
}

Tensor GlobalAvgPool::backward(const Tensor& dy) const {
  if (dy.c != c_ || dy.h != 1 || dy.w != 1)
    fail_input("global avg pool backward shape mismatch");
  Tensor dx(h_, w_, c_);
  const std::size_t n = static_cast<std::size_t>(h_) * w_;
  for (int ch = 0; ch < c_; ++ch) {
    const double g = dy.v[ch] / static_cast<double>(n);
    double* p = dx.plane(ch);
    for (std::size_t i = 0; i < n; ++i) p[i] = g;
  }
  return dx;
}

Tensor GlobalMaxPool::forward(const Tensor& x) {
  h_ = x.h;
  w_ = x.w;
  c_ = x.c;
  Tensor y(1, 1, x.c);
  argmax_.assign(x.c, 0);
  const std::size_t n = static_cast<std::size_t>(x.h) * x.w;
  for (int ch = 0; ch < x.c; ++ch) {
    const double* p = x.plane(ch);
    double best = p[0];
    int best_idx = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (p[i] > best) {
        best = p[i];
        best_idx = static_cast<int>(i);
      }
    }
    y.v[ch] = best;
    argmax_[ch] = best_idx;
  }
  return y;
}

Tensor GlobalMaxPool::backward(const Tensor& dy) const {
  if (dy.c != c_ || dy.h != 1 || dy.w != 1)
    fail_input("global max pool backward shape mismatch");
  Tensor dx(h_, w_, c_);
  for (int ch = 0; ch < c_; ++ch)
    dx.plane(ch)[argmax_[ch]] = dy.v[ch];
  return dx;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) fail_input("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

double softmax_cross_entropy(const std::vector<double>& logits, int target,
                             std::vector<double>* grad_logits) {
  if (target < 0 || target >= static_cast<int>(logits.size()))
    fail_input("cross entropy target out of range");
  const std::vector<double> p = softmax(logits);
  const double loss = -std::log(std::max(p[target], 1e-300));
  if (grad_logits) {
    *grad_logits = p;
    (*grad_logits)[target] -= 1.0;
  }
  return loss;
}

}  // namespace apsense::nn
