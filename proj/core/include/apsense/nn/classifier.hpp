#pragma once

#include <memory>
#include <string>
#include <vector>

#include "apsense/nn/abm.hpp"
#include "apsense/nn/backbone.hpp"

namespace apsense::nn {

/// Binary class scores; class index 1 is the hotspot (positive) class.
struct ClassScores {
  double p_non_hotspot = 0.0;
  double p_hotspot = 0.0;
};

inline constexpr int kClassNonHotspot = 0;
inline constexpr int kClassHotspot = 1;

/// Where class-activation maps read activations and gradients from.
enum class CamTarget { backbone_last_conv, abm_output };

CamTarget cam_target_from_string(const std::string& s);
std::string to_string(CamTarget t);

/// Backbone + attention block + global average pool + linear head.
/// forward_logits caches every intermediate needed by backward and by
/// the class-activation methods.
class AbmClassifier {
 public:
  /// `rng` drives weight initialization of the attention block and
  /// the head; the backbone arrives already initialized.
  AbmClassifier(std::unique_ptr<Backbone> backbone, AbmVariant variant,
                int compression, std::mt19937_64& rng);

  std::vector<double> forward_logits(const Tensor& input, bool training);
  /// Accumulates parameter gradients from d loss / d logits and fills
  /// the activation-gradient caches. Returns d loss / d input.
  Tensor backward_from_logits(const std::vector<double>& d_logits);

  /// Eval-mode forward + softmax.
  ClassScores predict(const Tensor& input);

  const Backbone& backbone() const { return *backbone_; }
  const AbmBlock& abm() const { return abm_; }
  AbmVariant variant() const { return abm_.config().variant; }
  int compression() const { return abm_.config().compression; }

  const Tensor& activation(CamTarget t) const;
  const Tensor& activation_gradient(CamTarget t) const;

  std::vector<Param*> params();
  void zero_grad();
  /// fc-only mode freezes everything except the linear head.
  void set_fc_only(bool fc_only);

 private:
  std::unique_ptr<Backbone> backbone_;
  AbmBlock abm_;
  GlobalAvgPool gap_;
  Dense fc_;
  Tensor abm_out_;
  Tensor abm_out_grad_;
};

/// Convenience constructor used by the CLI and tests.
AbmClassifier make_classifier(const std::string& backbone_name,
                              AbmVariant variant, int compression,
                              std::uint64_t seed);

}  // namespace apsense::nn
