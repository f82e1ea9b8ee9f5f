#include "fakenews/synthetic.hpp"

#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"

namespace fakenews {
namespace {

// Two-syllable pseudo-words: consonant + vowel sign + consonant. Index k maps
// to a unique triple, so distinct k give distinct words.
std::string pseudo_word(std::size_t k) {
  static const char* consonants[] = {"ক", "খ", "গ", "চ", "জ", "ট", "ড", "ত", "দ", "ন",
                                     "প", "ব", "ম", "র", "ল", "স", "হ"};
  static const char* signs[] = {"া", "ি", "ী", "ু", "ে", "ো"};
  constexpr std::size_t nc = std::size(consonants);
  constexpr std::size_t ns = std::size(signs);
  std::string w = consonants[k % nc];
  w += signs[(k / nc) % ns];
  w += consonants[(k / (nc * ns)) % nc];
  return w;
}

}  // namespace

const SyntheticVocabulary& synthetic_vocabulary() {
  static const SyntheticVocabulary vocab = [] {
    SyntheticVocabulary v;
    std::size_t k = 0;
    // Stride keeps neighbouring pools from sharing a leading consonant.
    auto next = [&k] { return pseudo_word(7 * k++ + 3); };
    for (int i = 0; i < 20; ++i) v.fake_keywords.push_back(next());
    for (int i = 0; i < 20; ++i) v.real_keywords.push_back(next());
    for (int i = 0; i < 30; ++i) v.filler.push_back(next());
    return v;
  }();
  return vocab;
}

Corpus make_synthetic_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 20 || n % 2 != 0) throw ConfigError("synthetic corpus size must be even and >= 20");
  const auto& vocab = synthetic_vocabulary();
  Rng rng(derive_seed(seed, "synthetic_corpus"));

  Corpus corpus;
  corpus.source_path = "synthetic:" + std::to_string(n) + ":" + std::to_string(seed);
  corpus.documents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = i % 2 == 0 ? Label::fake : Label::real;
    const auto& keywords = label == Label::fake ? vocab.fake_keywords : vocab.real_keywords;
    const std::size_t length = 5 + rng.below(36);
    const std::size_t headline_len = 2 + rng.below(4);
    const std::size_t forced = rng.below(length);

    std::vector<std::string> words;
    words.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
      if (t == forced || rng.unit() < 0.5) {
        words.push_back(keywords[rng.below(keywords.size())]);
      } else {
        words.push_back(vocab.filler[rng.below(vocab.filler.size())]);
      }
    }
    Document doc;
    doc.label = label;
    for (std::size_t t = 0; t < length; ++t) {
      std::string& dst = t < headline_len ? doc.headline : doc.content;
      if (!dst.empty()) dst.push_back(' ');
      dst += words[t];
    }
    doc.content += "।";
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace fakenews
