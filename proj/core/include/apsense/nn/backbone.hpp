#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "apsense/nn/layers.hpp"
#include "apsense/nn/tensor.hpp"

namespace apsense::nn {

/// Convolutional feature extractor. Implementations cache the
/// activation of their final convolution (after its nonlinearity,
/// before the final pooling) so class-activation maps can target it;
/// backward() fills the matching gradient cache.
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual std::string name() const = 0;
  virtual int feature_channels() const = 0;
  /// Square input edge the preprocessing stage should resize to.
  virtual int preferred_input_size() const = 0;
  virtual std::array<double, 3> input_mean() const = 0;
  virtual std::array<double, 3> input_std() const = 0;

  virtual Tensor forward(const Tensor& x, bool training) = 0;
  virtual Tensor backward(const Tensor& dy) = 0;

  virtual const Tensor& last_conv_activation() const = 0;
  virtual const Tensor& last_conv_gradient() const = 0;

  virtual void collect(std::vector<Param*>& out) = 0;
};

/// Three conv/ReLU/pool stages (3->8->16->16 channels). Small enough
/// to train on a desktop CPU in double precision; the global pooling
/// head downstream makes it input-size agnostic (minimum 8x8).
class TinyBackbone final : public Backbone {
 public:
  TinyBackbone();

  std::string name() const override { return "tiny3"; }
  int feature_channels() const override { return 16; }
  int preferred_input_size() const override { return 224; }
  std::array<double, 3> input_mean() const override { return {0.5, 0.5, 0.5}; }
  std::array<double, 3> input_std() const override { return {0.5, 0.5, 0.5}; }

  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x, bool training) override;
  Tensor backward(const Tensor& dy) override;

  const Tensor& last_conv_activation() const override { return last_act_; }
  const Tensor& last_conv_gradient() const override { return last_grad_; }

  void collect(std::vector<Param*>& out) override;

 private:
  Conv2d conv1_, conv2_, conv3_;
  ReLU relu1_, relu2_, relu3_;
  MaxPool2d pool1_, pool2_, pool3_;
  Tensor last_act_;
  Tensor last_grad_;
};

/// Factory by name; "tiny3" is the only built-in. Other backbones
/// plug in by implementing the Backbone interface.
std::unique_ptr<Backbone> make_backbone(const std::string& name,
                                        std::mt19937_64& rng);

}  // namespace apsense::nn
