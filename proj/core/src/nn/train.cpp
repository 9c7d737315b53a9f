#include "apsense/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "apsense/common/error.hpp"

namespace apsense::nn {
namespace {

double mean_loss_over(AbmClassifier& model,
                      const std::vector<TrainSample>& samples) {
  double total = 0.0;
  for (const TrainSample& s : samples) {
    const std::vector<double> logits = model.forward_logits(s.input, false);
    total += softmax_cross_entropy(logits, s.label, nullptr);
  }
  return total / static_cast<double>(samples.size());
}

}  // namespace

TrainResult train_classifier(AbmClassifier& model,
                             const std::vector<TrainSample>& train_set,
                             const std::vector<TrainSample>& val_set,
                             const TrainConfig& config) {
  if (train_set.empty()) fail_input("training set is empty");
  if (config.epochs < 1) fail_config("epoch count must be positive");
  if (config.batch_size < 1) fail_config("batch size must be positive");
  if (!(config.learning_rate > 0.0)) fail_config("learning rate must be positive");
  if (config.momentum < 0.0 || config.momentum >= 1.0)
    fail_config("momentum must be in [0, 1)");
  for (const TrainSample& s : train_set)
    if (s.label != 0 && s.label != 1) fail_input("labels must be 0 or 1");

  model.set_fc_only(config.fc_only);
  std::vector<Param*> params = model.params();
  std::vector<std::vector<double>> velocity(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    velocity[i].assign(params[i]->w.size(), 0.0);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);

    double epoch_loss = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      const std::size_t batch_end =
          std::min(cursor + static_cast<std::size_t>(config.batch_size),
                   order.size());
      const double batch_n = static_cast<double>(batch_end - cursor);

      model.zero_grad();
      for (std::size_t i = cursor; i < batch_end; ++i) {
        const TrainSample& s = train_set[order[i]];
        const std::vector<double> logits = model.forward_logits(s.input, true);
        std::vector<double> d_logits;
        const double loss = softmax_cross_entropy(logits, s.label, &d_logits);
        if (!std::isfinite(loss))
          fail_numeric("training diverged: non-finite loss at epoch " +
                       std::to_string(epoch));
        epoch_loss += loss;
        model.backward_from_logits(d_logits);
      }

      for (std::size_t i = 0; i < params.size(); ++i) {
        Param* p = params[i];
        if (!p->trainable) continue;
        for (std::size_t j = 0; j < p->w.size(); ++j) {
          velocity[i][j] = config.momentum * velocity[i][j] -
                           config.learning_rate * p->g[j] / batch_n;
          p->w[j] += velocity[i][j];
        }
      }
      cursor = batch_end;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(train_set.size());
    if (!val_set.empty()) {
      stats.val_loss = mean_loss_over(model, val_set);
      const BinaryMetrics m = evaluate_classifier(model, val_set);
      stats.val_accuracy = m.accuracy;
    }
    result.history.push_back(stats);
  }
  return result;
}

BinaryMetrics evaluate_classifier(AbmClassifier& model,
                                  const std::vector<TrainSample>& samples) {
  if (samples.empty()) fail_input("evaluation set is empty");
  BinaryMetrics m;
  for (const TrainSample& s : samples) {
    const ClassScores scores = model.predict(s.input);
    const int predicted = scores.p_hotspot >= scores.p_non_hotspot
                              ? kClassHotspot
                              : kClassNonHotspot;
    if (predicted == kClassHotspot)
      (s.label == kClassHotspot ? m.tp : m.fp)++;
    else
      (s.label == kClassHotspot ? m.fn : m.tn)++;
  }
  const double total = static_cast<double>(samples.size());
  m.accuracy = (m.tp + m.tn) / total;
  m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
  m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace apsense::nn
