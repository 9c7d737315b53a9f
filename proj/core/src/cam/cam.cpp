#include "apsense/cam/cam.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/imagery/codec.hpp"

namespace apsense::cam {
namespace {

using nn::Tensor;

std::vector<double> combine_and_normalize(const Tensor& act,
                                          const std::vector<double>& weights) {
  const std::size_t plane = static_cast<std::size_t>(act.h) * act.w;
  std::vector<double> map(plane, 0.0);
  for (int ch = 0; ch < act.c; ++ch) {
    const double wk = weights[ch];
    if (wk == 0.0) continue;
    const double* p = act.plane(ch);
    for (std::size_t i = 0; i < plane; ++i) map[i] += wk * p[i];
  }
  for (double& x : map) x = x > 0.0 ? x : 0.0;

  const auto [mn_it, mx_it] = std::minmax_element(map.begin(), map.end());
  const double mn = *mn_it, mx = *mx_it;
  const double range = mx - mn;
  if (range > 0.0)
    for (double& x : map) x = (x - mn) / range;
  else
    std::fill(map.begin(), map.end(), 0.0);
  return map;
}

std::vector<double> upsample(const std::vector<double>& src, int sh, int sw,
                             int dh, int dw) {
  if (sh == dh && sw == dw) return src;
  std::vector<double> dst(static_cast<std::size_t>(dh) * dw);
  nn::resize_bilinear_plane(src.data(), sh, sw, dst.data(), dh, dw);
  return dst;
}

std::vector<double> gradient_weights(const Tensor& grad) {
  const std::size_t plane = static_cast<std::size_t>(grad.h) * grad.w;
  std::vector<double> w(grad.c, 0.0);
  for (int ch = 0; ch < grad.c; ++ch) {
    const double* g = grad.plane(ch);
    double s = 0.0;
    for (std::size_t i = 0; i < plane; ++i) s += g[i];
    w[ch] = s / static_cast<double>(plane);
  }
  return w;
}

std::vector<double> second_order_weights(const Tensor& act, const Tensor& grad) {
  const std::size_t plane = static_cast<std::size_t>(act.h) * act.w;
  std::vector<double> w(act.c, 0.0);
  for (int ch = 0; ch < act.c; ++ch) {
    const double* a = act.plane(ch);
    const double* g = grad.plane(ch);
    double act_sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) act_sum += a[i];

    std::vector<double> alpha(plane, 0.0);
    double alpha_sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      const double g2 = g[i] * g[i];
      const double denom = 2.0 * g2 + act_sum * g2 * g[i];
      if (denom != 0.0) alpha[i] = g2 / denom;
      alpha_sum += alpha[i];
    }
    // Per-channel normalization keeps the coefficients a convex
    // combination; with uniform gradients each becomes 1/(H*W).
    if (alpha_sum > 0.0)
      for (double& a_i : alpha) a_i /= alpha_sum;

    double wk = 0.0;
    for (std::size_t i = 0; i < plane; ++i)
      wk += alpha[i] * (g[i] > 0.0 ? g[i] : 0.0);
    w[ch] = wk;
  }
  return w;
}

void backward_logit(nn::AbmClassifier& model, const Tensor& input,
                    int target_class) {
  model.forward_logits(input, false);
  std::vector<double> onehot(2, 0.0);
  onehot[target_class] = 1.0;
  model.zero_grad();
  model.backward_from_logits(onehot);
}

double class_prob(nn::AbmClassifier& model, const Tensor& input,
                  int target_class) {
  const std::vector<double> p = nn::softmax(model.forward_logits(input, false));
  return p[target_class];
}

std::vector<double> scorecam_weights(nn::AbmClassifier& model,
                                     const Tensor& input, int target_class,
                                     const Tensor& act) {
  const std::size_t plane = static_cast<std::size_t>(act.h) * act.w;
  const double baseline =
      class_prob(model, Tensor(input.h, input.w, input.c), target_class);

  std::vector<double> deltas(act.c, 0.0);
  for (int ch = 0; ch < act.c; ++ch) {
    const double* a = act.plane(ch);
    const auto [mn, mx] = std::minmax_element(a, a + plane);
    std::vector<double> mask(plane, 0.0);
    if (*mx > *mn)
      for (std::size_t i = 0; i < plane; ++i) mask[i] = (a[i] - *mn) / (*mx - *mn);

    const std::vector<double> up = upsample(mask, act.h, act.w, input.h, input.w);
    Tensor masked = input;
    const std::size_t in_plane = static_cast<std::size_t>(input.h) * input.w;
    for (int c = 0; c < input.c; ++c) {
      double* p = masked.plane(c);
      for (std::size_t i = 0; i < in_plane; ++i) p[i] *= up[i];
    }
    deltas[ch] = class_prob(model, masked, target_class) - baseline;
  }
  return nn::softmax(deltas);
}

}  // namespace

Method method_from_string(const std::string& s) {
  if (s == "gradcam") return Method::gradcam;
  if (s == "gradcampp") return Method::gradcampp;
  if (s == "scorecam") return Method::scorecam;
  fail_config("unknown explanation method '" + s +
              "' (expected gradcam, gradcampp or scorecam)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::gradcam: return "gradcam";
    case Method::gradcampp: return "gradcampp";
    case Method::scorecam: return "scorecam";
  }
  return "?";
}

Heatmap compute_cam(nn::AbmClassifier& model, const Tensor& input,
                    Method method, int target_class, nn::CamTarget target,
                    int out_h, int out_w) {
  if (target_class != 0 && target_class != 1)
    fail_input("target class must be 0 or 1");
  if (out_h < 1 || out_w < 1) fail_input("heatmap output size must be positive");

  std::vector<double> weights;
  Tensor act;
  if (method == Method::scorecam) {
    model.forward_logits(input, false);
    act = model.activation(target);
    weights = scorecam_weights(model, input, target_class, act);
  } else {
    backward_logit(model, input, target_class);
    act = model.activation(target);
    const Tensor& grad = model.activation_gradient(target);
    weights = method == Method::gradcam ? gradient_weights(grad)
                                        : second_order_weights(act, grad);
  }

  const std::vector<double> map = combine_and_normalize(act, weights);
  Heatmap heat;
  heat.h = out_h;
  heat.w = out_w;
  heat.v = upsample(map, act.h, act.w, out_h, out_w);
  heat.method = method;
  heat.target = target;
  heat.target_class = target_class;
  return heat;
}

imagery::ImageU8 heatmap_to_gray(const Heatmap& heatmap) {
  imagery::ImageU8 img(heatmap.h, heatmap.w, 1);
  for (std::size_t i = 0; i < heatmap.v.size(); ++i)
    img.v[i] = static_cast<std::uint8_t>(
        std::lround(std::clamp(heatmap.v[i], 0.0, 1.0) * 255.0));
  return img;
}

void write_heatmap(const std::filesystem::path& png_path, const Heatmap& heatmap) {
  imagery::write_png(png_path, heatmap_to_gray(heatmap));
  nlohmann::json side;
  side["method"] = to_string(heatmap.method);
  side["target"] = nn::to_string(heatmap.target);
  side["class"] = heatmap.target_class;
  side["height"] = heatmap.h;
  side["width"] = heatmap.w;
  std::filesystem::path sidecar = png_path;
  sidecar += ".json";
  apsense::fs::atomic_write(sidecar, side.dump(2) + "\n");
}

}  // namespace apsense::cam
