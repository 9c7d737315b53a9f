#pragma once

#include <string>
#include <utility>
#include <vector>

#include "apsense/nn/layers.hpp"
#include "apsense/nn/tensor.hpp"

namespace apsense::nn {

/// Output wiring of the attention block.
///   a: identity passthrough (ablation baseline)
///   b: SA + PA
///   c: F_in + SA + PA (default)
///   d: F_in + PA + CA + SA
enum class AbmVariant { a, b, c, d };

AbmVariant abm_variant_from_string(const std::string& s);
std::string to_string(AbmVariant v);

struct AbmConfig {
  int channels = 16;
  int compression = 16;  // channel attention bottleneck divisor
  AbmVariant variant = AbmVariant::c;
};

/// Channel gate: per-channel max and average pools are summed, passed
/// through a bottleneck MLP, and squashed to (0,1). The gate rescales
/// every channel plane of the input.
class ChannelAttention {
 public:
  ChannelAttention(const std::string& prefix, int channels, int compression);

  void init(std::mt19937_64& rng);
  /// Returns (gate (1,1,C), gated tensor (H,W,C)).
  std::pair<Tensor, Tensor> forward(const Tensor& x);
  Tensor backward(const Tensor& d_gated);
  void collect(std::vector<Param*>& out);

 private:
  GlobalAvgPool gap_;
  GlobalMaxPool gmp_;
  Dense fc1_;
  ReLU relu_;
  Dense fc2_;
  Sigmoid sig_;
  Tensor x_;
  Tensor gate_;
};

/// Multi-scale feature extractor: 1x1, 3x3 and 5x5 convolutions (each
/// C -> C/4, batch-normalized) are summed, then refined by a 3x3
/// convolution, ReLU, 7x7 convolution and sigmoid.
class VRecField {
 public:
  VRecField(const std::string& prefix, int channels);

  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x, bool training);
  Tensor backward(const Tensor& dy);
  void collect(std::vector<Param*>& out);

  int out_channels() const { return out_ch_; }

 private:
  int out_ch_ = 0;
  Conv2d conv1_, conv3_, conv5_;
  BatchNorm2d bn1_, bn3_, bn5_;
  Conv2d refine_;
  ReLU relu_;
  Conv2d squash_;
  Sigmoid sig_;
};

/// Spatial gate: two receptive-field branches over the channel-gated
/// tensor are concatenated and fused to a single-plane map in (0,1),
/// which rescales the raw input at every pixel.
class SpatialAttention {
 public:
  SpatialAttention(const std::string& prefix, int channels);

  void init(std::mt19937_64& rng);
  /// Returns (gate (H,W,1), gated tensor (H,W,C)).
  /// `channel_gated` feeds the branches; `x` is the tensor being gated.
  std::pair<Tensor, Tensor> forward(const Tensor& channel_gated,
                                    const Tensor& x, bool training);
  /// Returns (d x, d channel_gated).
  std::pair<Tensor, Tensor> backward(const Tensor& d_gated);
  void collect(std::vector<Param*>& out);

 private:
  VRecField branch1_, branch2_;
  Conv2d fuse_;
  Sigmoid sig_;
  Tensor x_;
  Tensor gate_;
  int branch_ch_ = 0;
};

/// Pointwise gate: two 1x1 convolutions with a ReLU between, squashed
/// to (0,1); gates the input elementwise at full channel depth.
class PointAttention {
 public:
  PointAttention(const std::string& prefix, int channels);

  void init(std::mt19937_64& rng);
  /// Returns (gate (H,W,C), gated tensor (H,W,C)).
  std::pair<Tensor, Tensor> forward(const Tensor& x);
  Tensor backward(const Tensor& d_gated);
  void collect(std::vector<Param*>& out);

 private:
  Conv2d conv1_;
  ReLU relu_;
  Conv2d conv2_;
  Sigmoid sig_;
  Tensor x_;
  Tensor gate_;
};

/// Attention maps captured by the last forward pass, for inspection
/// and explanation overlays.
struct AttentionMaps {
  Tensor channel_gate;  // (1,1,C)
  Tensor spatial_gate;  // (H,W,1)
  Tensor point_gate;    // (H,W,C)
};

/// Full attention block combining the three gates per the configured
/// variant. forward/backward chain through every active branch.
class AbmBlock {
 public:
  AbmBlock(const std::string& prefix, const AbmConfig& config);

  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x, bool training);
  Tensor backward(const Tensor& dy);
  void collect(std::vector<Param*>& out);

  const AbmConfig& config() const { return config_; }
  const AttentionMaps& maps() const { return maps_; }

 private:
  AbmConfig config_;
  ChannelAttention channel_;
  SpatialAttention spatial_;
  PointAttention point_;
  AttentionMaps maps_;
};

}  // namespace apsense::nn
