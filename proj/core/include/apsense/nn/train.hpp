#pragma once

#include <cstdint>
#include <vector>

#include "apsense/nn/classifier.hpp"

namespace apsense::nn {

struct TrainSample {
  Tensor input;
  int label = 0;  // class index; 1 = hotspot
};

struct TrainConfig {
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  bool fc_only = false;
  std::uint64_t seed = 1;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
};

/// Minibatch SGD with momentum. Samples are reshuffled every epoch
/// from a generator seeded by config.seed, so a rerun with identical
/// inputs reproduces the run exactly. Throws a numeric error if the
/// loss stops being finite.
TrainResult train_classifier(AbmClassifier& model,
                             const std::vector<TrainSample>& train_set,
                             const std::vector<TrainSample>& val_set,
                             const TrainConfig& config);

struct BinaryMetrics {
  int tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Eval-mode pass over a labeled set; hotspot (class 1) is positive.
/// Ratios with a zero denominator are reported as 0.
BinaryMetrics evaluate_classifier(AbmClassifier& model,
                                  const std::vector<TrainSample>& samples);

}  // namespace apsense::nn
