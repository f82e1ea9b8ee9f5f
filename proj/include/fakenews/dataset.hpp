#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fakenews {

/// Class label. Numeric values are the model's targets (fake = 0, real = 1).
enum class Label : std::uint8_t { fake = 0, real = 1 };

std::string_view to_string(Label label);

/// One news item.
struct Document {
  std::string headline;
  std::string content;
  Label label = Label::fake;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Surviving rows of a CSV file, in file order.
struct Corpus {
  std::vector<Document> documents;
  std::string source_path;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
};

struct ClassCounts {
  std::size_t fake = 0;
  std::size_t real = 0;

  std::size_t total() const { return fake + real; }
  std::size_t of(Label label) const { return label == Label::fake ? fake : real; }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Why rows were dropped while loading.
struct LoadReport {
  std::size_t data_rows = 0;
  std::size_t kept = 0;
  std::size_t dropped_missing = 0;  // absent or blank field
  std::size_t dropped_bad_label = 0;

  nlohmann::json to_json() const;
};

/// Train / validation / test fractions.
struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

/// A three-way partition. `*_rows` are indices into the input corpus, ascending.
struct SplitSet {
  Corpus train;
  Corpus validation;
  Corpus test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> validation_rows;
  std::vector<std::size_t> test_rows;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

/// Loads headLine/content/label columns (header matched case-insensitively,
/// any order, extra columns ignored). Rows with a missing or blank field or an
/// unparseable label are dropped and tallied in `report` when given.
Corpus load_corpus(const std::filesystem::path& path, LoadReport* report = nullptr);

/// Same as load_corpus but over in-memory CSV text.
Corpus parse_corpus(std::string_view csv_text, std::string source_name,
                    LoadReport* report = nullptr);

/// Writes a corpus as CSV with header headLine,content,label.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string corpus_to_csv(const Corpus& corpus);

ClassCounts class_counts(const Corpus& corpus);

/// Per-class seeded shuffle, then floor(n_c * ratio) documents of each class
/// go to validation and test; the rounding residue stays in train.
SplitSet stratified_split(const Corpus& corpus, const SplitRatios& ratios,
                          std::uint64_t seed);

/// Duplicates minority documents (sampled with replacement) until both
/// classes have equal counts. Originals first, then the duplicates in draw order.
Corpus oversample(const Corpus& train, std::uint64_t seed);

}  // namespace fakenews
