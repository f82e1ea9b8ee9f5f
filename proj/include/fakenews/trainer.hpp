#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fakenews/nn.hpp"
#include "fakenews/vectorizer.hpp"

namespace fakenews {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0;  // mean of the epoch's batch losses
  double train_accuracy = 0;
  double val_loss = 0;
  double val_accuracy = 0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainOptions {
  /// Worker threads for per-example gradients. Results do not depend on it:
  /// per-example gradients are always reduced in ascending example order.
  std::size_t threads = 1;
  std::function<void(const EpochRecord&)> on_epoch;
  /// epoch is 1-based, batch 0-based within the epoch.
  std::function<void(std::size_t epoch, std::size_t batch, double loss)> on_batch;
  /// Starting point; init_params(hp, hp.seed) when absent.
  std::optional<nn::ModelParams<float>> initial;
};

struct TrainResult {
  nn::ModelParams<float> params;
  std::vector<EpochRecord> history;
};

/// Mini-batch Adam on mean BCE. Each epoch reshuffles the training set with a
/// generator seeded from hp.seed, steps once per batch (last batch may be
/// short), then measures validation loss and accuracy at threshold 0.5.
/// Throws DataError on an empty set, NumericError on a non-finite loss.
TrainResult train(std::span<const EncodedExample> train_set,
                  std::span<const EncodedExample> val_set, const nn::Hyperparams& hp,
                  const TrainOptions& options = {});

struct LossAccuracy {
  double loss = 0;
  double accuracy = 0;
};

LossAccuracy measure(const nn::ModelParams<float>& params, std::span<const EncodedExample> set,
                     double clip_epsilon, std::size_t threads = 1);

std::vector<float> predict_probabilities(const nn::ModelParams<float>& params,
                                         std::span<const EncodedExample> set,
                                         double clip_epsilon, std::size_t threads = 1);

/// Header epoch,train_loss,train_acc,val_loss,val_acc then one row per epoch.
std::string history_csv(std::span<const EpochRecord> history);

}  // namespace fakenews
