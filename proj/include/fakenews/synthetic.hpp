#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fakenews/dataset.hpp"

namespace fakenews {

/// Word pools used by make_synthetic_corpus. Fixed, independent of the seed.
struct SyntheticVocabulary {
  std::vector<std::string> fake_keywords;  // 20 words
  std::vector<std::string> real_keywords;  // 20 words
  std::vector<std::string> filler;         // shared by both classes
};

const SyntheticVocabulary& synthetic_vocabulary();

/// n/2 fake and n/2 real documents (alternating, fake first). Each document
/// has 5-40 tokens split between headline and content; every token is either
/// a keyword from its own class pool or a shared filler word, with at least
/// one keyword per document. Requires n >= 20 and even.
Corpus make_synthetic_corpus(std::size_t n, std::uint64_t seed);

}  // namespace fakenews
