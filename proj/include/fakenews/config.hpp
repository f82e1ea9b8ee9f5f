#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fakenews/dataset.hpp"
#include "fakenews/nn.hpp"
#include "fakenews/text.hpp"

namespace fakenews {

/// Everything a run depends on. Serialized flat, one key per field.
struct RunConfig {
  std::string data_path;
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  SplitRatios ratios;
  bool oversample = true;
  TextSource text_source = TextSource::both;
  LemmaMode lemmatizer = LemmaMode::identity;
  std::string suffix_file;  // empty: built-in list
  std::size_t max_words = 10000;
  std::size_t seq_len = 100;
  std::size_t embed_dim = 100;
  std::size_t gru_units = 32;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double clip_epsilon = 1e-7;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  std::size_t threads = 1;

  /// Throws ConfigError on the first invalid field.
  void validate() const;

  /// Model hyperparameters for a vocabulary of `vocab_words` content words.
  nn::Hyperparams hyperparams(std::size_t vocab_words) const;

  nlohmann::json to_json() const;
  /// Applies the keys of `j` on top of `base`; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j, RunConfig base);
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path, RunConfig base);
};

}  // namespace fakenews
