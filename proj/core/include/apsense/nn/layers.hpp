#pragma once

#include <random>
#include <string>
#include <vector>

#include "apsense/nn/tensor.hpp"

namespace apsense::nn {

/// Learnable parameter block with a matching gradient accumulator.
/// Non-trainable params (running statistics, frozen weights) are
/// skipped by the optimizer but still serialized by checkpoints.
struct Param {
  std::string name;
  std::vector<double> w;
  std::vector<double> g;
  bool trainable = true;

  Param() = default;
  Param(std::string name_, std::size_t n, bool trainable_ = true)
      : name(std::move(name_)), w(n, 0.0), g(n, 0.0), trainable(trainable_) {}

  void zero_grad() { std::fill(g.begin(), g.end(), 0.0); }
};

/// 2-D convolution with "same" padding (pad = k / 2) and stride 1.
/// Forward caches the im2col buffer so backward can reuse it.
class Conv2d {
 public:
  Conv2d(std::string name, int in_ch, int out_ch, int ksize);

  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(std::vector<Param*>& out);

  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }
  int kernel() const { return k_; }

  Param weight;  // layout [out][in][ky][kx]
  Param bias;    // [out]

 private:
  int in_ch_ = 0;
  int out_ch_ = 0;
  int k_ = 0;
  int pad_ = 0;
  int in_h_ = 0;
  int in_w_ = 0;
  std::vector<double> cols_;  // (in_ch*k*k) x (h*w), column-major by output pixel
};

/// Fully connected layer; input is any tensor whose total size matches.
class Dense {
 public:
  Dense(std::string name, int in_features, int out_features);

  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(std::vector<Param*>& out);

  int in_features() const { return in_; }
  int out_features() const { return out_; }

  Param weight;  // [out][in]
  Param bias;    // [out]

 private:
  int in_ = 0;
  int out_ = 0;
  Tensor x_;
};

/// Per-channel normalization. In training mode statistics are computed
/// over the spatial positions of the sample being processed (the
/// library trains sample by sample); running averages are kept for
/// inference. gamma starts at 1 and beta at 0, so a freshly built
/// layer applies no learned scale or shift.
class BatchNorm2d {
 public:
  BatchNorm2d(std::string name, int channels, double momentum = 0.1,
              double epsilon = 1e-5);

  Tensor forward(const Tensor& x, bool training);
  Tensor backward(const Tensor& dy);
  void collect(std::vector<Param*>& out);

  Param gamma;
  Param beta;
  Param running_mean;  // non-trainable buffer
  Param running_var;   // non-trainable buffer

 private:
  int channels_ = 0;
  double momentum_ = 0.1;
  double eps_ = 1e-5;
  bool last_training_ = false;
  Tensor x_;
  std::vector<double> mean_, var_;  // statistics used by the last forward
};

class ReLU {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Tensor x_;
};

class Sigmoid {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Tensor y_;
};

/// 2x2 max pooling with stride 2. Odd trailing rows/columns are
/// dropped (floor semantics). Argmax positions are cached for backward.
class MaxPool2d {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  int in_h_ = 0, in_w_ = 0, c_ = 0;
  std::vector<int> argmax_;
};

class GlobalAvgPool {
 public:
  Tensor forward(const Tensor& x);      // (H,W,C) -> (1,1,C)
  Tensor backward(const Tensor& dy) const;

 private:
  int h_ = 0, w_ = 0, c_ = 0;
};

class GlobalMaxPool {
 public:
  Tensor forward(const Tensor& x);      // (H,W,C) -> (1,1,C)
  Tensor backward(const Tensor& dy) const;

 private:
  int h_ = 0, w_ = 0, c_ = 0;
  std::vector<int> argmax_;
};

/// Numerically stable softmax over a flat logit vector.
std::vector<double> softmax(const std::vector<double>& logits);

/// Cross-entropy of softmax(logits) against an integer target class.
/// grad_logits receives d loss / d logits.
double softmax_cross_entropy(const std::vector<double>& logits, int target,
                             std::vector<double>* grad_logits);

}  // namespace apsense::nn
