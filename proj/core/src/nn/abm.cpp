#include "apsense/nn/abm.hpp"

#include "apsense/common/error.hpp"

namespace apsense::nn {

AbmVariant abm_variant_from_string(const std::string& s) {
  if (s == "a") return AbmVariant::a;
  if (s == "b") return AbmVariant::b;
  if (s == "c") return AbmVariant::c;
  if (s == "d") return AbmVariant::d;
  fail_config("unknown attention variant '" + s + "' (expected a, b, c or d)");
}

std::string to_string(AbmVariant v) {
  switch (v) {
    case AbmVariant::a: return "a";
    case AbmVariant::b: return "b";
    case AbmVariant::c: return "c";
    case AbmVariant::d: return "d";
  }
  return "?";
}

ChannelAttention::ChannelAttention(const std::string& prefix, int channels,
                                   int compression)
    : fc1_(prefix + ".fc1", channels, channels / compression),
      fc2_(prefix + ".fc2", channels / compression, channels) {
  if (compression < 1 || channels % compression != 0)
    fail_config("channel count must be divisible by the compression factor");
}

void ChannelAttention::init(std::mt19937_64& rng) {
  fc1_.init(rng);
  fc2_.init(rng);
}

std::pair<Tensor, Tensor> ChannelAttention::forward(const Tensor& x) {
  x_ = x;
  Tensor pooled = gap_.forward(x);
  pooled += gmp_.forward(x);
  gate_ = sig_.forward(fc2_.forward(relu_.forward(fc1_.forward(pooled))));
  return {gate_, mul_per_channel(x, gate_)};
}

Tensor ChannelAttention::backward(const Tensor& d_gated) {
  if (!d_gated.same_shape(x_))
    fail_input("channel attention backward shape mismatch");
  // Product rule: d gate picks up the per-channel dot with x, the
  // direct path rescales by the gate.
  Tensor d_gate(1, 1, x_.c);
  const std::size_t plane = static_cast<std::size_t>(x_.h) * x_.w;
  for (int ch = 0; ch < x_.c; ++ch) {
    const double* dg = d_gated.plane(ch);
    const double* px = x_.plane(ch);
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += dg[i] * px[i];
    d_gate.v[ch] = s;
  }
  Tensor dx = mul_per_channel(d_gated, gate_);

  Tensor d_pooled = fc1_.backward(
      relu_.backward(fc2_.backward(sig_.backward(d_gate))));
  dx += gap_.backward(d_pooled);
  dx += gmp_.backward(d_pooled);
  return dx;
}

void ChannelAttention::collect(std::vector<Param*>& out) {
  fc1_.collect(out);
  fc2_.collect(out);
}

VRecField::VRecField(const std::string& prefix, int channels)
    : out_ch_(channels / 4),
      conv1_(prefix + ".conv1", channels, channels / 4, 1),
      conv3_(prefix + ".conv3", channels, channels / 4, 3),
      conv5_(prefix + ".conv5", channels, channels / 4, 5),
      bn1_(prefix + ".bn1", channels / 4),
      bn3_(prefix + ".bn3", channels / 4),
      bn5_(prefix + ".bn5", channels / 4),
      refine_(prefix + ".refine", channels / 4, channels / 4, 3),
      squash_(prefix + ".squash", channels / 4, channels / 4, 7) {
  if (channels % 4 != 0)
    fail_config("receptive-field branches need a channel count divisible by 4");
}

void VRecField::init(std::mt19937_64& rng) {
  conv1_.init(rng);
  conv3_.init(rng);
  conv5_.init(rng);
  refine_.init(rng);
  squash_.init(rng);
}

Tensor VRecField::forward(const Tensor& x, bool training) {
  Tensor f = bn1_.forward(conv1_.forward(x), training);
  f += bn3_.forward(conv3_.forward(x), training);
  f += bn5_.forward(conv5_.forward(x), training);
  return sig_.forward(squash_.forward(relu_.forward(refine_.forward(f))));
}

Tensor VRecField::backward(const Tensor& dy) {
  Tensor df = refine_.backward(
      relu_.backward(squash_.backward(sig_.backward(dy))));
  Tensor dx = conv1_.backward(bn1_.backward(df));
  dx += conv3_.backward(bn3_.backward(df));
  dx += conv5_.backward(bn5_.backward(df));
  return dx;
}

void VRecField::collect(std::vector<Param*>& out) {
  conv1_.collect(out);
  bn1_.collect(out);
  conv3_.collect(out);
  bn3_.collect(out);
  conv5_.collect(out);
  bn5_.collect(out);
  refine_.collect(out);
  squash_.collect(out);
}

SpatialAttention::SpatialAttention(const std::string& prefix, int channels)
    : branch1_(prefix + ".branch1", channels),
      branch2_(prefix + ".branch2", channels),
      fuse_(prefix + ".fuse", channels / 2, 1, 3),
      branch_ch_(channels / 4) {}

void SpatialAttention::init(std::mt19937_64& rng) {
  branch1_.init(rng);
  branch2_.init(rng);
  fuse_.init(rng);
}

std::pair<Tensor, Tensor> SpatialAttention::forward(const Tensor& channel_gated,
                                                    const Tensor& x,
                                                    bool training) {
  if (channel_gated.h != x.h || channel_gated.w != x.w)
    fail_input("spatial attention inputs must share spatial shape");
  x_ = x;
  Tensor v1 = branch1_.forward(channel_gated, training);
  Tensor v2 = branch2_.forward(channel_gated, training);
  gate_ = sig_.forward(fuse_.forward(concat_channels(v1, v2)));
  return {gate_, mul_per_pixel(x, gate_)};
}

std::pair<Tensor, Tensor> SpatialAttention::backward(const Tensor& d_gated) {
  if (!d_gated.same_shape(x_))
    fail_input("spatial attention backward shape mismatch");
  Tensor d_gate(x_.h, x_.w, 1);
  const std::size_t plane = static_cast<std::size_t>(x_.h) * x_.w;
  for (int ch = 0; ch < x_.c; ++ch) {
    const double* dg = d_gated.plane(ch);
    const double* px = x_.plane(ch);
    for (std::size_t i = 0; i < plane; ++i) d_gate.v[i] += dg[i] * px[i];
  }
  Tensor dx = mul_per_pixel(d_gated, gate_);

  Tensor d_cat = fuse_.backward(sig_.backward(d_gate));
  Tensor d_v1(d_cat.h, d_cat.w, branch_ch_);
  Tensor d_v2(d_cat.h, d_cat.w, branch_ch_);
  std::copy(d_cat.v.begin(), d_cat.v.begin() + d_v1.v.size(), d_v1.v.begin());
  std::copy(d_cat.v.begin() + d_v1.v.size(), d_cat.v.end(), d_v2.v.begin());

  Tensor d_in = branch1_.backward(d_v1);
  d_in += branch2_.backward(d_v2);
  return {dx, d_in};
}

void SpatialAttention::collect(std::vector<Param*>& out) {
  branch1_.collect(out);
  branch2_.collect(out);
  fuse_.collect(out);
}

PointAttention::PointAttention(const std::string& prefix, int channels)
    : conv1_(prefix + ".conv1", channels, channels, 1),
      conv2_(prefix + ".conv2", channels, channels, 1) {}

void PointAttention::init(std::mt19937_64& rng) {
  conv1_.init(rng);
  conv2_.init(rng);
}

std::pair<Tensor, Tensor> PointAttention::forward(const Tensor& x) {
  x_ = x;
  gate_ = sig_.forward(conv2_.forward(relu_.forward(conv1_.forward(x))));
  return {gate_, hadamard(x, gate_)};
}

Tensor PointAttention::backward(const Tensor& d_gated) {
  if (!d_gated.same_shape(x_))
    fail_input("point attention backward shape mismatch");
  Tensor d_gate = hadamard(d_gated, x_);
  Tensor dx = hadamard(d_gated, gate_);
  dx += conv1_.backward(
      relu_.backward(conv2_.backward(sig_.backward(d_gate))));
  return dx;
}

void PointAttention::collect(std::vector<Param*>& out) {
  conv1_.collect(out);
  conv2_.collect(out);
}

AbmBlock::AbmBlock(const std::string& prefix, const AbmConfig& config)
    : config_(config),
      channel_(prefix + ".channel", config.channels, config.compression),
      spatial_(prefix + ".spatial", config.channels),
      point_(prefix + ".point", config.channels) {
  if (config.channels < 4) fail_config("attention block needs at least 4 channels");
}

void AbmBlock::init(std::mt19937_64& rng) {
  channel_.init(rng);
  spatial_.init(rng);
  point_.init(rng);
}

Tensor AbmBlock::forward(const Tensor& x, bool training) {
  if (x.c != config_.channels)
    fail_input("attention block channel mismatch");
  if (config_.variant == AbmVariant::a) {
    maps_ = AttentionMaps{};
    return x;
  }
  auto [ca_gate, ca] = channel_.forward(x);
  auto [sa_gate, sa] = spatial_.forward(ca, x, training);
  auto [pa_gate, pa] = point_.forward(x);
  maps_ = AttentionMaps{ca_gate, sa_gate, pa_gate};

  switch (config_.variant) {
    case AbmVariant::b:
      return sa + pa;
    case AbmVariant::c:
      return x + sa + pa;
    case AbmVariant::d:
      return x + pa + ca + sa;
    case AbmVariant::a:
      break;
  }
  return x;
}

Tensor AbmBlock::backward(const Tensor& dy) {
  if (config_.variant == AbmVariant::a) return dy;

  auto [dx_sa, d_ca_from_sa] = spatial_.backward(dy);
  Tensor d_ca = std::move(d_ca_from_sa);
  if (config_.variant == AbmVariant::d) d_ca += dy;

  Tensor dx = channel_.backward(d_ca);
  dx += dx_sa;
  dx += point_.backward(dy);
  if (config_.variant == AbmVariant::c || config_.variant == AbmVariant::d)
    dx += dy;
  return dx;
}

void AbmBlock::collect(std::vector<Param*>& out) {
  if (config_.variant == AbmVariant::a) return;
  channel_.collect(out);
  spatial_.collect(out);
  point_.collect(out);
}

}  // namespace apsense::nn
