#include "fakenews/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fakenews/error.hpp"

namespace fakenews {

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid configuration: " + what);
  };
  require(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0,
          "split ratios must be positive");
  require(std::abs(ratios.train + ratios.validation + ratios.test - 1.0) <= 1e-9,
          "split ratios must sum to 1");
  require(max_words >= 1, "max_words must be >= 1");
  require(threads >= 1, "threads must be >= 1");
  hyperparams(max_words).validate();
}

nn::Hyperparams RunConfig::hyperparams(std::size_t vocab_words) const {
  nn::Hyperparams hp;
  hp.vocab_rows = vocab_words + 2;
  hp.embed_dim = embed_dim;
  hp.gru_units = gru_units;
  hp.seq_len = seq_len;
  hp.learning_rate = learning_rate;
  hp.beta1 = beta1;
  hp.beta2 = beta2;
  hp.adam_epsilon = adam_epsilon;
  hp.clip_epsilon = clip_epsilon;
  hp.batch_size = batch_size;
  hp.epochs = epochs;
  hp.seed = seed;
  return hp;
}

nlohmann::json RunConfig::to_json() const {
  return {{"data_path", data_path},
          {"output_dir", output_dir},
          {"seed", seed},
          {"train_ratio", ratios.train},
          {"val_ratio", ratios.validation},
          {"test_ratio", ratios.test},
          {"oversample", oversample},
          {"text_source", to_string(text_source)},
          {"lemmatizer", to_string(lemmatizer)},
          {"suffix_file", suffix_file},
          {"max_words", max_words},
          {"seq_len", seq_len},
          {"embed_dim", embed_dim},
          {"gru_units", gru_units},
          {"learning_rate", learning_rate},
          {"beta1", beta1},
          {"beta2", beta2},
          {"adam_epsilon", adam_epsilon},
          {"clip_epsilon", clip_epsilon},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"threads", threads}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "data_path") c.data_path = v.get<std::string>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "train_ratio") c.ratios.train = v.get<double>();
      else if (key == "val_ratio") c.ratios.validation = v.get<double>();
      else if (key == "test_ratio") c.ratios.test = v.get<double>();
      else if (key == "oversample") c.oversample = v.get<bool>();
      else if (key == "text_source") c.text_source = parse_text_source(v.get<std::string>());
      else if (key == "lemmatizer") c.lemmatizer = parse_lemma_mode(v.get<std::string>());
      else if (key == "suffix_file") c.suffix_file = v.get<std::string>();
      else if (key == "max_words") c.max_words = v.get<std::size_t>();
      else if (key == "seq_len") c.seq_len = v.get<std::size_t>();
      else if (key == "embed_dim") c.embed_dim = v.get<std::size_t>();
      else if (key == "gru_units") c.gru_units = v.get<std::size_t>();
      else if (key == "learning_rate") c.learning_rate = v.get<double>();
      else if (key == "beta1") c.beta1 = v.get<double>();
      else if (key == "beta2") c.beta2 = v.get<double>();
      else if (key == "adam_epsilon") c.adam_epsilon = v.get<double>();
      else if (key == "clip_epsilon") c.clip_epsilon = v.get<double>();
      else if (key == "batch_size") c.batch_size = v.get<std::size_t>();
      else if (key == "epochs") c.epochs = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else throw ConfigError("unknown configuration key: " + key);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("wrong type for configuration key: " + key);
    }
  }
  return c;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }

RunConfig RunConfig::from_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, std::move(base));
}

}  // namespace fakenews
