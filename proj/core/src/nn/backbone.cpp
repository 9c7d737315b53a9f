#include "apsense/nn/backbone.hpp"

#include "apsense/common/error.hpp"

namespace apsense::nn {

TinyBackbone::TinyBackbone()
    : conv1_("backbone.conv1", 3, 8, 3),
      conv2_("backbone.conv2", 8, 16, 3),
      conv3_("backbone.conv3", 16, 16, 3) {}

void TinyBackbone::init(std::mt19937_64& rng) {
  conv1_.init(rng);
  conv2_.init(rng);
  conv3_.init(rng);
}

Tensor TinyBackbone::forward(const Tensor& x, bool) {
  if (x.c != 3) fail_input("backbone expects a 3-channel input");
  if (x.h < 8 || x.w < 8) fail_input("backbone input must be at least 8x8");
  Tensor t = pool1_.forward(relu1_.forward(conv1_.forward(x)));
  t = pool2_.forward(relu2_.forward(conv2_.forward(t)));
  last_act_ = relu3_.forward(conv3_.forward(t));
  return pool3_.forward(last_act_);
}

Tensor TinyBackbone::backward(const Tensor& dy) {
  last_grad_ = pool3_.backward(dy);
  Tensor t = conv3_.backward(relu3_.backward(last_grad_));
  t = conv2_.backward(relu2_.backward(pool2_.backward(t)));
  return conv1_.backward(relu1_.backward(pool1_.backward(t)));
}

void TinyBackbone::collect(std::vector<Param*>& out) {
  conv1_.collect(out);
  conv2_.collect(out);
  conv3_.collect(out);
}

std::unique_ptr<Backbone> make_backbone(const std::string& name,
                                        std::mt19937_64& rng) {
  if (name == "tiny3") {
    auto b = std::make_unique<TinyBackbone>();
    b->init(rng);
    return b;
  }
  fail_config("unknown backbone '" + name + "'");
}

}  // namespace apsense::nn
