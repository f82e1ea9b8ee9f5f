#include "fakenews/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"

namespace fakenews::nn {

// ---------------------------------------------------------------------------
// Hyperparams

void Hyperparams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid hyperparameter: ") + what);
  };
  require(vocab_rows >= 1, "vocab_rows must be >= 1");
  require(embed_dim >= 1, "embed_dim must be >= 1");
  require(gru_units >= 1, "gru_units must be >= 1");
  require(seq_len >= 1, "seq_len must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(learning_rate >= 0.0 && learning_rate < 1.0, "learning_rate must be in [0, 1)");
  require(beta1 > 0.0 && beta1 < 1.0, "beta1 must be in (0, 1)");
  require(beta2 > 0.0 && beta2 < 1.0, "beta2 must be in (0, 1)");
  require(adam_epsilon > 0.0 && adam_epsilon < 1.0, "adam_epsilon must be in (0, 1)");
  require(clip_epsilon > 0.0 && clip_epsilon < 0.5, "clip_epsilon must be in (0, 0.5)");
}

nlohmann::json Hyperparams::to_json() const {
  return {{"vocab_rows", vocab_rows},     {"embed_dim", embed_dim},
          {"gru_units", gru_units},       {"seq_len", seq_len},
          {"learning_rate", learning_rate}, {"beta1", beta1},
          {"beta2", beta2},               {"adam_epsilon", adam_epsilon},
          {"clip_epsilon", clip_epsilon}, {"batch_size", batch_size},
          {"epochs", epochs},             {"seed", seed}};
}

Hyperparams Hyperparams::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("hyperparameters must be a JSON object");
  Hyperparams hp;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "vocab_rows") hp.vocab_rows = value.get<std::size_t>();
      else if (key == "embed_dim") hp.embed_dim = value.get<std::size_t>();
      else if (key == "gru_units") hp.gru_units = value.get<std::size_t>();
      else if (key == "seq_len") hp.seq_len = value.get<std::size_t>();
      else if (key == "learning_rate") hp.learning_rate = value.get<double>();
      else if (key == "beta1") hp.beta1 = value.get<double>();
      else if (key == "beta2") hp.beta2 = value.get<double>();
      else if (key == "adam_epsilon") hp.adam_epsilon = value.get<double>();
      else if (key == "clip_epsilon") hp.clip_epsilon = value.get<double>();
      else if (key == "batch_size") hp.batch_size = value.get<std::size_t>();
      else if (key == "epochs") hp.epochs = value.get<std::size_t>();
      else if (key == "seed") hp.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown hyperparameter key: " + key);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("wrong type for hyperparameter: " + key);
    }
  }
  return hp;
}

// ---------------------------------------------------------------------------
// ModelParams

template <typename T>
ModelParams<T> ModelParams<T>::zeros(std::size_t vocab_rows, std::size_t embed_dim,
                                     std::size_t units) {
  ModelParams p;
  p.vocab_rows = vocab_rows;
  p.embed_dim = embed_dim;
  p.units = units;
  p.E.assign(vocab_rows * embed_dim, T(0));
  p.W.assign(embed_dim * 3 * units, T(0));
  p.U.assign(units * 3 * units, T(0));
  p.b.assign(3 * units, T(0));
  p.w_out.assign(units, T(0));
  p.b_out = T(0);
  return p;
}

template <typename T>
bool ModelParams<T>::all_finite() const {
  bool ok = true;
  for_each_tensor([&](std::span<const T> s) {
    for (T v : s) ok = ok && std::isfinite(v);
  });
  return ok;
}

namespace {

template <typename T>
T sigmoid(T x) {
  // Split form avoids overflow in exp for large |x|.
  if (x >= 0) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// Symmetric draw strictly inside (-limit, limit) after rounding to T.
template <typename T>
T draw_symmetric(Rng& rng, double limit) {
  const T bound = static_cast<T>(limit);
  for (;;) {
    const T v = static_cast<T>(rng.uniform(-limit, limit));
    if (v > -bound && v < bound) return v;
  }
}

// Shared recurrence. When `cache` is null only the running state is kept.
template <typename T>
T run_forward(std::span<const TokenId> ids, const ModelParams<T>& params,
              double clip_epsilon, ForwardCache<T>* cache) {
  const std::size_t n = params.units;
  const std::size_t n3 = 3 * n;
  const std::size_t dim = params.embed_dim;
  for (TokenId id : ids) {
    if (id >= params.vocab_rows) {
      throw DataError("token id " + std::to_string(id) + " out of range for " +
                      std::to_string(params.vocab_rows) + " embedding rows");
    }
  }
  const std::size_t steps = ids.size();

  std::vector<T> h(n, T(0)), h_next(n), pre(n3), rh(n), z(n), r(n), hc(n);
  if (cache) {
    cache->ids.assign(ids.begin(), ids.end());
    cache->h.assign((steps + 1) * n, T(0));
    cache->z.resize(steps * n);
    cache->r.resize(steps * n);
    cache->hc.resize(steps * n);
  }

  const T* W = params.W.data();
  const T* U = params.U.data();
  for (std::size_t t = 0; t < steps; ++t) {
    const T* x = params.E.data() + static_cast<std::size_t>(ids[t]) * dim;
    std::copy(params.b.begin(), params.b.end(), pre.begin());
    for (std::size_t i = 0; i < dim; ++i) {
      const T xi = x[i];
      const T* row = W + i * n3;
      for (std::size_t j = 0; j < n3; ++j) pre[j] += xi * row[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const T hi = h[i];
      const T* row = U + i * n3;
      for (std::size_t j = 0; j < 2 * n; ++j) pre[j] += hi * row[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = sigmoid(pre[j]);
      r[j] = sigmoid(pre[n + j]);
      rh[j] = r[j] * h[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const T v = rh[i];
      const T* row = U + i * n3 + 2 * n;
      for (std::size_t j = 0; j < n; ++j) pre[2 * n + j] += v * row[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      hc[j] = std::tanh(pre[2 * n + j]);
      h_next[j] = (T(1) - z[j]) * h[j] + z[j] * hc[j];
    }
    h.swap(h_next);
    if (cache) {
      std::copy(z.begin(), z.end(), cache->z.begin() + t * n);
      std::copy(r.begin(), r.end(), cache->r.begin() + t * n);
      std::copy(hc.begin(), hc.end(), cache->hc.begin() + t * n);
      std::copy(h.begin(), h.end(), cache->h.begin() + (t + 1) * n);
    }
  }

  T logit = params.b_out;
  for (std::size_t j = 0; j < n; ++j) logit += params.w_out[j] * h[j];
  const T raw = sigmoid(logit);
  const T lo = static_cast<T>(clip_epsilon);
  const T hi = static_cast<T>(1.0 - clip_epsilon);
  const T p = std::clamp(raw, lo, hi);
  if (cache) {
    cache->logit = logit;
    cache->p = p;
    cache->clipped = raw < lo || raw > hi;
  }
  return p;
}

}  // namespace

template <typename T>
ModelParams<T> init_params(const Hyperparams& hp, std::uint64_t seed) {
  hp.validate();
  auto p = ModelParams<T>::zeros(hp.vocab_rows, hp.embed_dim, hp.gru_units);
  const std::size_t n = hp.gru_units;
  const std::size_t n3 = 3 * n;
  Rng rng(derive_seed(seed, "init_params"));

  for (auto& e : p.E) e = draw_symmetric<T>(rng, 0.05);

  const double w_limit = std::sqrt(6.0 / static_cast<double>(hp.embed_dim + n));
  const double u_limit = std::sqrt(6.0 / static_cast<double>(n + n));
  for (std::size_t gate = 0; gate < 3; ++gate) {
    for (std::size_t i = 0; i < hp.embed_dim; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.W[i * n3 + gate * n + j] = draw_symmetric<T>(rng, w_limit);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p.U[i * n3 + gate * n + j] = draw_symmetric<T>(rng, u_limit);
    }
  }
  const double out_limit = std::sqrt(6.0 / static_cast<double>(n + 1));
  for (auto& w : p.w_out) w = draw_symmetric<T>(rng, out_limit);
  return p;
}

template <typename T>
ForwardResult<T> forward(std::span<const TokenId> ids, const ModelParams<T>& params,
                         double clip_epsilon) {
  ForwardResult<T> out;
  out.p = run_forward(ids, params, clip_epsilon, &out.cache);
  return out;
}

template <typename T>
T predict_proba(std::span<const TokenId> ids, const ModelParams<T>& params,
                double clip_epsilon) {
  return run_forward<T>(ids, params, clip_epsilon, nullptr);
}

template <typename T>
T bce_loss(T p, int y) {
  return y ? -std::log(p) : -std::log(T(1) - p);
}

template <typename T>
void ExampleGrad<T>::accumulate_into(GradSet<T>& into) const {
  auto add = [](std::vector<T>& dst, const std::vector<T>& src) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
  };
  add(into.W, dense.W);
  add(into.U, dense.U);
  add(into.b, dense.b);
  add(into.w_out, dense.w_out);
  into.b_out += dense.b_out;
  const std::size_t dim = into.embed_dim;
  for (std::size_t k = 0; k < embedding_ids.size(); ++k) {
    T* dst = into.E.data() + static_cast<std::size_t>(embedding_ids[k]) * dim;
    const T* src = embedding_rows.data() + k * dim;
    for (std::size_t i = 0; i < dim; ++i) dst[i] += src[i];
  }
}

template <typename T>
ExampleGrad<T> backward_sparse(const ForwardCache<T>& cache, const ModelParams<T>& params,
                               int y) {
  const std::size_t n = params.units;
  const std::size_t n3 = 3 * n;
  const std::size_t dim = params.embed_dim;
  const std::size_t steps = cache.ids.size();

  ExampleGrad<T> g;
  g.dense = ModelParams<T>::zeros(0, dim, n);
  g.dense.vocab_rows = params.vocab_rows;
  g.embedding_ids.reserve(steps);
  g.embedding_rows.assign(steps * dim, T(0));

  // d loss / d logit for sigmoid + BCE; zero on the clipped plateau.
  const T dlogit = cache.clipped ? T(0) : cache.p - static_cast<T>(y);
  g.dense.b_out = dlogit;
  const T* h_T = cache.h.data() + steps * n;
  std::vector<T> dh(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.dense.w_out[j] = dlogit * h_T[j];
    dh[j] = dlogit * params.w_out[j];
  }

  std::vector<T> da(n3), dh_prev(n), drh(n), rh(n);
  const T* W = params.W.data();
  const T* U = params.U.data();
  T* dW = g.dense.W.data();
  T* dU = g.dense.U.data();

  for (std::size_t t = steps; t-- > 0;) {
    const T* h_prev = cache.h.data() + t * n;
    const T* z = cache.z.data() + t * n;
    const T* r = cache.r.data() + t * n;
    const T* hc = cache.hc.data() + t * n;

    // h = (1 - z) h_prev + z hc
    for (std::size_t j = 0; j < n; ++j) {
      const T dz = dh[j] * (hc[j] - h_prev[j]);
      const T dhc = dh[j] * z[j];
      dh_prev[j] = dh[j] * (T(1) - z[j]);
      da[j] = dz * z[j] * (T(1) - z[j]);
      da[2 * n + j] = dhc * (T(1) - hc[j] * hc[j]);
      rh[j] = r[j] * h_prev[j];
    }
    // candidate: (r * h_prev) U_h
    for (std::size_t i = 0; i < n; ++i) {
      const T* row = U + i * n3 + 2 * n;
      T acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * da[2 * n + j];
      drh[i] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const T dr = drh[j] * h_prev[j];
      dh_prev[j] += drh[j] * r[j];
      da[n + j] = dr * r[j] * (T(1) - r[j]);
    }
    // z and r recurrent terms
    for (std::size_t i = 0; i < n; ++i) {
      const T* row = U + i * n3;
      T acc = 0;
      for (std::size_t j = 0; j < 2 * n; ++j) acc += row[j] * da[j];
      dh_prev[i] += acc;
    }
    // parameter gradients
    for (std::size_t i = 0; i < n; ++i) {
      T* drow = dU + i * n3;
      const T hp = h_prev[i];
      const T rhi = rh[i];
      for (std::size_t j = 0; j < 2 * n; ++j) drow[j] += hp * da[j];
      for (std::size_t j = 2 * n; j < n3; ++j) drow[j] += rhi * da[j];
    }
    for (std::size_t j = 0; j < n3; ++j) g.dense.b[j] += da[j];

    const TokenId id = cache.ids[t];
    const T* x = params.E.data() + static_cast<std::size_t>(id) * dim;
    T* dx = g.embedding_rows.data() + g.embedding_ids.size() * dim;
    for (std::size_t i = 0; i < dim; ++i) {
      const T xi = x[i];
      const T* row = W + i * n3;
      T* drow = dW + i * n3;
      T acc = 0;
      for (std::size_t j = 0; j < n3; ++j) {
        drow[j] += xi * da[j];
        acc += row[j] * da[j];
      }
      dx[i] = acc;
    }
    g.embedding_ids.push_back(id);
    dh.swap(dh_prev);
  }
  return g;
}

template <typename T>
GradSet<T> backward(const ForwardCache<T>& cache, const ModelParams<T>& params, int y) {
  auto grads = ModelParams<T>::zeros_like(params);
  backward_sparse(cache, params, y).accumulate_into(grads);
  return grads;
}

template <typename T>
void adam_step(ModelParams<T>& params, const GradSet<T>& grads, AdamState<T>& state,
               const Hyperparams& hp) {
  if (!params.same_shape(grads) || !params.same_shape(state.m) || !params.same_shape(state.v)) {
    throw NumericError("adam_step: shape mismatch between parameters, gradients and state");
  }
  state.t += 1;
  const auto t = static_cast<double>(state.t);
  const T b1 = static_cast<T>(hp.beta1);
  const T b2 = static_cast<T>(hp.beta2);
  const T c1 = static_cast<T>(1.0 - std::pow(hp.beta1, t));
  const T c2 = static_cast<T>(1.0 - std::pow(hp.beta2, t));
  const T lr = static_cast<T>(hp.learning_rate);
  const T eps = static_cast<T>(hp.adam_epsilon);

  auto update = [&](std::span<T> theta, std::span<const T> g, std::span<T> m, std::span<T> v) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      const T m_hat = m[i] / c1;
      const T v_hat = v[i] / c2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  };
  update(params.E, grads.E, state.m.E, state.v.E);
  update(params.W, grads.W, state.m.W, state.v.W);
  update(params.U, grads.U, state.m.U, state.v.U);
  update(params.b, grads.b, state.m.b, state.v.b);
  update(params.w_out, grads.w_out, state.m.w_out, state.v.w_out);
  update(std::span<T>(&params.b_out, 1), std::span<const T>(&grads.b_out, 1),
         std::span<T>(&state.m.b_out, 1), std::span<T>(&state.v.b_out, 1));
}

// ---------------------------------------------------------------------------
// Gradient check

Hyperparams grad_check_hyperparams() {
  Hyperparams hp;
  hp.vocab_rows = 20;
  hp.embed_dim = 5;
  hp.gru_units = 4;
  hp.seq_len = 6;
  return hp;
}

GradCheckResult grad_check(const Hyperparams& hp_small, std::uint64_t seed, double eps,
                           const GradMutation& mutation) {
  hp_small.validate();
  auto params = init_params<double>(hp_small, seed);
  Rng rng(derive_seed(seed, "grad_check"));
  // Non-zero biases so every gate path carries signal.
  for (auto& v : params.b) v = rng.uniform(-0.5, 0.5);
  params.b_out = rng.uniform(-0.5, 0.5);

  std::vector<TokenId> ids(hp_small.seq_len);
  for (auto& id : ids) id = static_cast<TokenId>(rng.below(hp_small.vocab_rows));
  const int y = static_cast<int>(rng.below(2));

  auto loss_at = [&](const ModelParams<double>& p) {
    return bce_loss(predict_proba<double>(ids, p, hp_small.clip_epsilon), y);
  };

  const auto fwd = forward<double>(ids, params, hp_small.clip_epsilon);
  auto analytic = backward(fwd.cache, params, y);
  if (mutation) mutation(analytic);

  std::vector<double> flat_analytic;
  analytic.for_each_tensor([&](std::span<const double> s) {
    flat_analytic.insert(flat_analytic.end(), s.begin(), s.end());
  });

  GradCheckResult result;
  std::size_t k = 0;
  auto probe = params;
  probe.for_each_tensor([&](std::span<double> s) {
    for (double& v : s) {
      const double saved = v;
      v = saved + eps;
      const double up = loss_at(probe);
      v = saved - eps;
      const double down = loss_at(probe);
      v = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = flat_analytic[k++];
      const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      result.max_relative_error = std::max(result.max_relative_error, err);
    }
  });
  result.entries_checked = k;
  return result;
}

// ---------------------------------------------------------------------------

#define FAKENEWS_NN_INSTANTIATE(T)                                                         \
  template struct ModelParams<T>;                                                         \
  template struct ExampleGrad<T>;                                                         \
  template ModelParams<T> init_params<T>(const Hyperparams&, std::uint64_t);              \
  template ForwardResult<T> forward<T>(std::span<const TokenId>, const ModelParams<T>&,   \
                                       double);                                           \
  template T predict_proba<T>(std::span<const TokenId>, const ModelParams<T>&, double);   \
  template T bce_loss<T>(T, int);                                                         \
  template ExampleGrad<T> backward_sparse<T>(const ForwardCache<T>&, const ModelParams<T>&, \
                                             int);                                        \
  template GradSet<T> backward<T>(const ForwardCache<T>&, const ModelParams<T>&, int);    \
  template void adam_step<T>(ModelParams<T>&, const GradSet<T>&, AdamState<T>&,           \
                             const Hyperparams&);

FAKENEWS_NN_INSTANTIATE(float)
FAKENEWS_NN_INSTANTIATE(double)

#undef FAKENEWS_NN_INSTANTIATE

}  // namespace fakenews::nn
