#include "fakenews/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"

namespace fakenews {
namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers, contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
}

void check_lengths(std::span<const EncodedExample> set, std::size_t seq_len, const char* name) {
  for (const auto& ex : set) {
    if (ex.ids.size() != seq_len) {
      throw DataError(fmt::format("{} example has {} ids, expected {}", name, ex.ids.size(),
                                  seq_len));
    }
  }
}

}  // namespace

std::vector<float> predict_probabilities(const nn::ModelParams<float>& params,
                                         std::span<const EncodedExample> set,
                                         double clip_epsilon, std::size_t threads) {
  std::vector<float> out(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    out[i] = nn::predict_proba<float>(set[i].ids, params, clip_epsilon);
  });
  return out;
}

LossAccuracy measure(const nn::ModelParams<float>& params, std::span<const EncodedExample> set,
                     double clip_epsilon, std::size_t threads) {
  if (set.empty()) throw DataError("cannot measure an empty set");
  const auto probs = predict_probabilities(params, set, clip_epsilon, threads);
  double loss = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    loss += nn::bce_loss<double>(probs[i], set[i].label);
    correct += static_cast<int>(probs[i] >= 0.5f) == set[i].label;
  }
  const auto n = static_cast<double>(set.size());
  return {loss / n, static_cast<double>(correct) / n};
}

TrainResult train(std::span<const EncodedExample> train_set,
                  std::span<const EncodedExample> val_set, const nn::Hyperparams& hp,
                  const TrainOptions& options) {
  hp.validate();
  if (train_set.empty()) throw DataError("empty training set");
  if (val_set.empty()) throw DataError("empty validation set");
  check_lengths(train_set, hp.seq_len, "training");
  check_lengths(val_set, hp.seq_len, "validation");

  TrainResult result;
  result.params = options.initial ? *options.initial : nn::init_params<float>(hp, hp.seed);
  auto& params = result.params;
  if (params.vocab_rows != hp.vocab_rows || params.embed_dim != hp.embed_dim ||
      params.units != hp.gru_units) {
    throw ConfigError("initial parameters do not match the hyperparameters");
  }
  auto adam = nn::AdamState<float>::fresh(params);
  Rng shuffle_rng(derive_seed(hp.seed, "epoch_shuffle"));

  std::vector<std::size_t> order(train_set.size());
  std::vector<nn::ExampleGrad<float>> example_grads(hp.batch_size);
  std::vector<float> example_probs(hp.batch_size);
  auto grads = nn::ModelParams<float>::zeros_like(params);

  for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(std::span(order));

    double loss_sum = 0;
    std::size_t batches = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      const std::size_t count = std::min(hp.batch_size, order.size() - start);
      parallel_for(count, options.threads, [&](std::size_t k) {
        const auto& ex = train_set[order[start + k]];
        auto fwd = nn::forward<float>(ex.ids, params, hp.clip_epsilon);
        example_probs[k] = fwd.p;
        example_grads[k] = nn::backward_sparse(fwd.cache, params, ex.label);
      });

      // Fixed reduction order: ascending position within the batch.
      std::fill(grads.E.begin(), grads.E.end(), 0.0f);
      std::fill(grads.W.begin(), grads.W.end(), 0.0f);
      std::fill(grads.U.begin(), grads.U.end(), 0.0f);
      std::fill(grads.b.begin(), grads.b.end(), 0.0f);
      std::fill(grads.w_out.begin(), grads.w_out.end(), 0.0f);
      grads.b_out = 0.0f;
      double batch_loss = 0;
      for (std::size_t k = 0; k < count; ++k) {
        const int y = train_set[order[start + k]].label;
        batch_loss += nn::bce_loss<double>(example_probs[k], y);
        correct += static_cast<int>(example_probs[k] >= 0.5f) == y;
        example_grads[k].accumulate_into(grads);
      }
      batch_loss /= static_cast<double>(count);
      if (!std::isfinite(batch_loss)) {
        throw NumericError(fmt::format("non-finite loss at epoch {} batch {}", epoch, batches + 1));
      }
      const float inv = 1.0f / static_cast<float>(count);
      grads.for_each_tensor([inv](std::span<float> s) {
        for (float& v : s) v *= inv;
      });
      nn::adam_step(params, grads, adam, hp);

      if (options.on_batch) options.on_batch(epoch, batches, batch_loss);
      loss_sum += batch_loss;
      ++batches;
    }
    if (!params.all_finite()) {
      throw NumericError(fmt::format("parameters became non-finite during epoch {}", epoch));
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_set.size());
    const auto val = measure(params, val_set, hp.clip_epsilon, options.threads);
    rec.val_loss = val.loss;
    rec.val_accuracy = val.accuracy;
    if (!std::isfinite(rec.val_loss)) {
      throw NumericError(fmt::format("non-finite validation loss at epoch {}", epoch));
    }
    result.history.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);
  }
  return result;
}

std::string history_csv(std::span<const EpochRecord> history) {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& r : history) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.epoch, r.train_loss,
                       r.train_accuracy, r.val_loss, r.val_accuracy);
  }
  return out;
}

}  // namespace fakenews
