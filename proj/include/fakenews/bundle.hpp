#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fakenews/config.hpp"
#include "fakenews/nn.hpp"
#include "fakenews/pipeline.hpp"
#include "fakenews/vectorizer.hpp"

namespace fakenews {

inline constexpr int kBundleFormatVersion = 1;
inline constexpr std::string_view kBundleMagic = "FNGRUBDL";

/// A trained classifier: parameters plus everything needed to reproduce
/// its preprocessing.
struct ModelBundle {
  RunConfig config;
  std::vector<std::string> suffixes;  // resolved list when config.lemmatizer is suffix_strip
  Vocabulary vocabulary;
  nn::ModelParams<float> params;

  nn::Hyperparams hyperparams() const { return config.hyperparams(vocabulary.size()); }
  TextEncoder encoder() const;

  /// Human-readable part of the file.
  nlohmann::json manifest() const;
};

// File layout:
//   8 bytes   magic "FNGRUBDL"
//   8 bytes   manifest length M, unsigned little-endian
//   M bytes   manifest, UTF-8 JSON
//   payload   little-endian IEEE-754 float32: E (row-major), W, U, b, w_out, b_out
// W and U keep each gate block [z, r, h] contiguous along their columns.

std::string serialize_bundle(const ModelBundle& bundle);
/// Throws DataError on a bad magic, version mismatch, shape disagreement or
/// a payload whose size differs from 4 * parameter count.
ModelBundle deserialize_bundle(std::string_view bytes);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace fakenews
