#include "apsense/nn/classifier.hpp"

#include <algorithm>

#include "apsense/common/error.hpp"

namespace apsense::nn {
namespace {

int checked_channels(const Backbone* b) {
  if (!b) fail_config("classifier requires a backbone");
  return b->feature_channels();
}

}  // namespace

CamTarget cam_target_from_string(const std::string& s) {
  if (s == "backbone_last_conv") return CamTarget::backbone_last_conv;
  if (s == "abm_output") return CamTarget::abm_output;
  fail_config("unknown activation target '" + s +
              "' (expected backbone_last_conv or abm_output)");
}

std::string to_string(CamTarget t) {
  return t == CamTarget::backbone_last_conv ? "backbone_last_conv"
                                            : "abm_output";
}

AbmClassifier::AbmClassifier(std::unique_ptr<Backbone> backbone,
                             AbmVariant variant, int compression,
                             std::mt19937_64& rng)
    : backbone_(std::move(backbone)),
      abm_("abm",
           AbmConfig{checked_channels(backbone_.get()), compression, variant}),
      fc_("fc", backbone_->feature_channels(), 2) {
  abm_.init(rng);
  fc_.init(rng);
}

std::vector<double> AbmClassifier::forward_logits(const Tensor& input,
                                                  bool training) {
  Tensor features = backbone_->forward(input, training);
  abm_out_ = abm_.forward(features, training);
  Tensor logits = fc_.forward(gap_.forward(abm_out_));
  return logits.v;
}

Tensor AbmClassifier::backward_from_logits(const std::vector<double>& d_logits) {
  if (d_logits.size() != 2) fail_input("expected a 2-element logit gradient");
  Tensor dl(1, 1, 2);
  dl.v = d_logits;
  abm_out_grad_ = gap_.backward(fc_.backward(dl));
  Tensor d_features = abm_.backward(abm_out_grad_);
  return backbone_->backward(d_features);
}

ClassScores AbmClassifier::predict(const Tensor& input) {
  const std::vector<double> p = softmax(forward_logits(input, false));
  return ClassScores{p[kClassNonHotspot], p[kClassHotspot]};
}

const Tensor& AbmClassifier::activation(CamTarget t) const {
  return t == CamTarget::backbone_last_conv ? backbone_->last_conv_activation()
                                            : abm_out_;
}

const Tensor& AbmClassifier::activation_gradient(CamTarget t) const {
  return t == CamTarget::backbone_last_conv ? backbone_->last_conv_gradient()
                                            : abm_out_grad_;
}

std::vector<Param*> AbmClassifier::params() {
  std::vector<Param*> out;
  backbone_->collect(out);
  abm_.collect(out);
  fc_.collect(out);
  return out;
}

void AbmClassifier::zero_grad() {
  for (Param* p : params()) p->zero_grad();
}

void AbmClassifier::set_fc_only(bool fc_only) {
  std::vector<Param*> head;
  fc_.collect(head);
  for (Param* p : params()) {
    const bool is_head = std::find(head.begin(), head.end(), p) != head.end();
    const bool is_buffer = p->name.find("running_") != std::string::npos;
    p->trainable = is_buffer ? false : (!fc_only || is_head);
  }
}

AbmClassifier make_classifier(const std::string& backbone_name,
                              AbmVariant variant, int compression,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto backbone = make_backbone(backbone_name, rng);
  return AbmClassifier(std::move(backbone), variant, compression, rng);
}

}  // namespace apsense::nn
