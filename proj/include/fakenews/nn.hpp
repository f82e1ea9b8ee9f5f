#pragma once

// Embedding -> GRU -> dense sigmoid classifier with hand-written
// backpropagation through time and Adam.
//
// GRU cell, gate order [z, r, h] in every fused kernel:
//   z_t  = sigmoid(x_t W_z + h_{t-1} U_z + b_z)
//   r_t  = sigmoid(x_t W_r + h_{t-1} U_r + b_r)
//   hc_t = tanh(x_t W_h + (r_t * h_{t-1}) U_h + b_h)
//   h_t  = (1 - z_t) * h_{t-1} + z_t * hc_t
// Output: p = clip(sigmoid(w_out . h_T + b_out), eps, 1 - eps).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fakenews/vectorizer.hpp"

namespace fakenews::nn {

struct Hyperparams {
  std::size_t vocab_rows = 10002;  // content words + pad + oov
  std::size_t embed_dim = 100;
  std::size_t gru_units = 32;
  std::size_t seq_len = 100;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double clip_epsilon = 1e-7;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::uint64_t seed = 42;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static Hyperparams from_json(const nlohmann::json& j);
};

/// All learnable tensors, row-major.
///   E: vocab_rows x embed_dim
///   W: embed_dim x 3*units     U: units x 3*units     b: 3*units
///   w_out: units               b_out: scalar
template <typename T>
struct ModelParams {
  std::size_t vocab_rows = 0;
  std::size_t embed_dim = 0;
  std::size_t units = 0;
  std::vector<T> E, W, U, b, w_out;
  T b_out = 0;

  static ModelParams zeros(std::size_t vocab_rows, std::size_t embed_dim, std::size_t units);
  static ModelParams zeros_like(const ModelParams& other) {
    return zeros(other.vocab_rows, other.embed_dim, other.units);
  }

  std::size_t parameter_count() const {
    return E.size() + W.size() + U.size() + b.size() + w_out.size() + 1;
  }
  bool same_shape(const ModelParams& o) const {
    return vocab_rows == o.vocab_rows && embed_dim == o.embed_dim && units == o.units;
  }
  bool all_finite() const;

  /// Visits every tensor in serialization order: E, W, U, b, w_out, b_out.
  template <typename F>
  void for_each_tensor(F&& f) {
    f(std::span<T>(E));
    f(std::span<T>(W));
    f(std::span<T>(U));
    f(std::span<T>(b));
    f(std::span<T>(w_out));
    f(std::span<T>(&b_out, 1));
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    f(std::span<const T>(E));
    f(std::span<const T>(W));
    f(std::span<const T>(U));
    f(std::span<const T>(b));
    f(std::span<const T>(w_out));
    f(std::span<const T>(&b_out, 1));
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Gradients mirror the parameter layout.
template <typename T>
using GradSet = ModelParams<T>;

/// Everything backward() needs from one forward pass.
template <typename T>
struct ForwardCache {
  std::vector<TokenId> ids;
  std::vector<T> h;   // (seq_len + 1) x units, row 0 is h_0 = 0
  std::vector<T> z;   // seq_len x units
  std::vector<T> r;   // seq_len x units
  std::vector<T> hc;  // seq_len x units, tanh candidate
  T logit = 0;
  T p = 0;            // clipped probability
  bool clipped = false;
};

template <typename T>
struct ForwardResult {
  T p;
  ForwardCache<T> cache;
};

/// E ~ U(-0.05, 0.05); each gate block of W and U Glorot-uniform; w_out
/// Glorot-uniform; biases zero. Deterministic per seed.
template <typename T>
ModelParams<T> init_params(const Hyperparams& hp, std::uint64_t seed);

/// Runs the recurrence over every id. Throws DataError on an id >= vocab_rows.
template <typename T>
ForwardResult<T> forward(std::span<const TokenId> ids, const ModelParams<T>& params,
                         double clip_epsilon);

/// Probability only; no cache is kept.
template <typename T>
T predict_proba(std::span<const TokenId> ids, const ModelParams<T>& params,
                double clip_epsilon);

/// -[y ln p + (1 - y) ln(1 - p)]
template <typename T>
T bce_loss(T p, int y);

/// Per-example gradient with the embedding part kept sparse: one row of
/// `embedding_rows` per timestep, from the last timestep to the first.
template <typename T>
struct ExampleGrad {
  GradSet<T> dense;  // E left empty
  std::vector<TokenId> embedding_ids;
  std::vector<T> embedding_rows;

  /// into += this, embedding rows scattered in stored order.
  void accumulate_into(GradSet<T>& into) const;
};

/// Exact gradient of bce_loss(forward(ids).p, y). When the output probability
/// was clipped the loss is locally constant and every gradient is zero.
template <typename T>
ExampleGrad<T> backward_sparse(const ForwardCache<T>& cache, const ModelParams<T>& params,
                               int y);

/// Dense-embedding variant of backward_sparse.
template <typename T>
GradSet<T> backward(const ForwardCache<T>& cache, const ModelParams<T>& params, int y);

template <typename T>
struct AdamState {
  ModelParams<T> m;
  ModelParams<T> v;
  std::uint64_t t = 0;

  static AdamState fresh(const ModelParams<T>& like) {
    return {ModelParams<T>::zeros_like(like), ModelParams<T>::zeros_like(like), 0};
  }
};

/// One bias-corrected Adam update in place.
template <typename T>
void adam_step(ModelParams<T>& params, const GradSet<T>& grads, AdamState<T>& state,
               const Hyperparams& hp);

/// Hook applied to the analytic gradient before comparison; lets tests plant bugs.
using GradMutation = std::function<void(GradSet<double>&)>;

struct GradCheckResult {
  double max_relative_error = 0;
  std::size_t entries_checked = 0;
};

/// Reduced-size hyperparameters used by the gradient check.
Hyperparams grad_check_hyperparams();

/// Compares backward() with central differences (L(θ+eps) - L(θ-eps)) / 2eps
/// for every parameter entry of a random 64-bit model; error per entry is
/// |a - n| / max(1e-8, |a| + |n|).
GradCheckResult grad_check(const Hyperparams& hp_small, std::uint64_t seed, double eps = 1e-3,
                           const GradMutation& mutation = {});

}  // namespace fakenews::nn
