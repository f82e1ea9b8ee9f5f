#include "fakenews/bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "fakenews/error.hpp"

namespace fakenews {
namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::string_view in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[i])} << (8 * i);
  return v;
}

nlohmann::json shapes_json(std::size_t rows, std::size_t dim, std::size_t units) {
  return {{"E", {rows, dim}},
          {"W", {dim, 3 * units}},
          {"U", {units, 3 * units}},
          {"b", {3 * units}},
          {"w_out", {units}},
          {"b_out", nlohmann::json::array()}};
}

}  // namespace

TextEncoder ModelBundle::encoder() const {
  return TextEncoder(config.text_source, Lemmatizer(config.lemmatizer, suffixes), config.seq_len);
}

nlohmann::json ModelBundle::manifest() const {
  return {{"format_version", kBundleFormatVersion},
          {"config", config.to_json()},
          {"suffixes", suffixes},
          {"vocabulary", vocabulary.to_json()},
          {"shapes", shapes_json(params.vocab_rows, params.embed_dim, params.units)},
          {"parameter_count", params.parameter_count()},
          {"payload_bytes", 4 * params.parameter_count()}};
}

std::string serialize_bundle(const ModelBundle& bundle) {
  const auto hp = bundle.hyperparams();
  if (bundle.params.vocab_rows != hp.vocab_rows || bundle.params.embed_dim != hp.embed_dim ||
      bundle.params.units != hp.gru_units) {
    throw DataError("bundle parameters do not match its configuration and vocabulary");
  }
  const std::string manifest = bundle.manifest().dump(2);
  std::string out(kBundleMagic);
  put_u64(out, manifest.size());
  out += manifest;
  out.reserve(out.size() + 4 * bundle.params.parameter_count());
  bundle.params.for_each_tensor([&out](std::span<const float> s) {
    for (float f : s) {
      const auto bits = std::bit_cast<std::uint32_t>(f);
      for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
  });
  return out;
}

ModelBundle deserialize_bundle(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 8) != kBundleMagic) {
    throw DataError("not a model bundle (bad magic)");
  }
  const std::uint64_t manifest_len = get_u64(bytes.substr(8, 8));
  if (manifest_len > bytes.size() - 16) {
    throw DataError(fmt::format("model bundle truncated inside manifest: expected {} manifest "
                                "bytes, {} available",
                                manifest_len, bytes.size() - 16));
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(16, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model bundle manifest is not valid JSON: ") + e.what());
  }

  ModelBundle b;
  try {
    const int version = manifest.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
      throw DataError(fmt::format("model bundle format version {} is not supported (expected {})",
                                  version, kBundleFormatVersion));
    }
    b.config = RunConfig::from_json(manifest.at("config"));
    b.suffixes = manifest.at("suffixes").get<std::vector<std::string>>();
    b.vocabulary = Vocabulary::from_json(manifest.at("vocabulary"));
    const auto hp = b.hyperparams();
    if (manifest.at("shapes") != shapes_json(hp.vocab_rows, hp.embed_dim, hp.gru_units)) {
      throw DataError("model bundle shapes disagree with its configuration and vocabulary");
    }
    b.params = nn::ModelParams<float>::zeros(hp.vocab_rows, hp.embed_dim, hp.gru_units);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model bundle manifest is missing a field: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("model bundle configuration is invalid: ") + e.what());
  }

  const std::string_view payload = bytes.substr(16 + manifest_len);
  const std::size_t expected = 4 * b.params.parameter_count();
  if (payload.size() != expected) {
    throw DataError(fmt::format("model bundle payload has {} bytes, expected {}", payload.size(),
                                expected));
  }
  std::size_t pos = 0;
  b.params.for_each_tensor([&](std::span<float> s) {
    for (float& f : s) {
      std::uint32_t bits = 0;
      for (int i = 0; i < 4; ++i) {
        bits |= std::uint32_t{static_cast<unsigned char>(payload[pos + i])} << (8 * i);
      }
      f = std::bit_cast<float>(bits);
      pos += 4;
    }
  });
  return b;
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  const std::string bytes = serialize_bundle(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model bundle: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing model bundle: " + path.string());
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model bundle: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_bundle(buf.str());
}

}  // namespace fakenews
