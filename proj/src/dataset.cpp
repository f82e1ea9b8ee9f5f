#include "fakenews/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fakenews/csv.hpp"
#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"

namespace fakenews {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<Label> parse_label(std::string_view raw) {
  const std::string v = lower_ascii(trim(raw));
  if (v == "fake") return Label::fake;
  if (v == "real") return Label::real;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::fake ? "fake" : "real";
}

nlohmann::json LoadReport::to_json() const {
  return {{"data_rows", data_rows},
          {"kept", kept},
          {"dropped_missing", dropped_missing},
          {"dropped_bad_label", dropped_bad_label}};
}

Corpus parse_corpus(std::string_view csv_text, std::string source_name,
                    LoadReport* report) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) throw DataError("empty corpus: no header row in " + source_name);

  const auto& header = records.front().fields;
  std::optional<std::size_t> col_headline, col_content, col_label;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = lower_ascii(trim(header[i]));
    if (name == "headline" && !col_headline) col_headline = i;
    if (name == "content" && !col_content) col_content = i;
    if (name == "label" && !col_label) col_label = i;
  }
  if (!col_headline || !col_content || !col_label) {
    throw DataError("CSV header of " + source_name +
                    " must contain columns headLine, content and label");
  }

  LoadReport local;
  Corpus corpus;
  corpus.source_path = std::move(source_name);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    ++local.data_rows;
    auto field = [&](std::size_t col) -> std::string_view {
      return col < f.size() ? std::string_view(f[col]) : std::string_view{};
    };
    const auto headline = field(*col_headline);
    const auto content = field(*col_content);
    const auto label_text = field(*col_label);
    if (trim(headline).empty() || trim(content).empty() || trim(label_text).empty()) {
      ++local.dropped_missing;
      continue;
    }
    const auto label = parse_label(label_text);
    if (!label) {
      ++local.dropped_bad_label;
      continue;
    }
    corpus.documents.push_back(Document{std::string(headline), std::string(content), *label});
  }
  local.kept = corpus.documents.size();
  if (report) *report = local;
  if (corpus.empty()) throw DataError("empty corpus: no usable rows in " + corpus.source_path);
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("file not found or unreadable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path.string(), report);
}

std::string corpus_to_csv(const Corpus& corpus) {
  std::string out = "headLine,content,label\n";
  for (const auto& d : corpus.documents) {
    out += csv::format_row({d.headline, d.content, std::string(to_string(d.label))});
    out.push_back('\n');
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << corpus_to_csv(corpus);
}

ClassCounts class_counts(const Corpus& corpus) {
  ClassCounts c;
  for (const auto& d : corpus.documents) {
    (d.label == Label::fake ? c.fake : c.real) += 1;
  }
  return c;
}

SplitSet stratified_split(const Corpus& corpus, const SplitRatios& ratios,
                          std::uint64_t seed) {
  const double parts[] = {ratios.train, ratios.validation, ratios.test};
  for (double p : parts) {
    if (!(p > 0.0)) throw ConfigError("split ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_class[static_cast<int>(corpus.documents[i].label)].push_back(i);
  }

  SplitSet out;
  out.seed = seed;
  out.ratios = ratios;
  Rng rng(derive_seed(seed, "stratified_split"));
  for (auto& members : by_class) {
    if (members.size() < 3) throw DataError("class too small to stratify");
    rng.shuffle(std::span(members));
    const auto n = static_cast<double>(members.size());
    // Nearest-integer held-out counts keep every part within one document of
    // its exact share; train takes the residue.
    const auto n_val = static_cast<std::size_t>(std::llround(n * ratios.validation));
    const auto n_test = static_cast<std::size_t>(std::llround(n * ratios.test));
    if (n_val + n_test >= members.size()) throw DataError("class too small to stratify");
    const std::size_t n_train = members.size() - n_val - n_test;
    auto it = members.begin();
    out.train_rows.insert(out.train_rows.end(), it, it + n_train);
    it += n_train;
    out.validation_rows.insert(out.validation_rows.end(), it, it + n_val);
    it += n_val;
    out.test_rows.insert(out.test_rows.end(), it, members.end());
  }

  auto materialize = [&](std::vector<std::size_t>& rows, Corpus& part) {
    std::sort(rows.begin(), rows.end());
    part.source_path = corpus.source_path;
    part.documents.reserve(rows.size());
    for (auto r : rows) part.documents.push_back(corpus.documents[r]);
  };
  materialize(out.train_rows, out.train);
  materialize(out.validation_rows, out.validation);
  materialize(out.test_rows, out.test);
  return out;
}

Corpus oversample(const Corpus& train, std::uint64_t seed) {
  const auto counts = class_counts(train);
  if (counts.fake == 0 || counts.real == 0) throw DataError("nothing to balance");

  Corpus out = train;
  if (counts.fake == counts.real) return out;

  const Label minority = counts.fake < counts.real ? Label::fake : Label::real;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.documents[i].label == minority) pool.push_back(i);
  }
  const std::size_t needed = std::max(counts.fake, counts.real) - pool.size();
  Rng rng(derive_seed(seed, "oversample"));
  out.documents.reserve(train.size() + needed);
  for (std::size_t k = 0; k < needed; ++k) {
    out.documents.push_back(train.documents[pool[rng.below(pool.size())]]);
  }
  return out;
}

}  // namespace fakenews
