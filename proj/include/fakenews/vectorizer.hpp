#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fakenews/dataset.hpp"
#include "fakenews/text.hpp"

namespace fakenews {

using TokenId = std::uint32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kOovId = 1;
inline constexpr TokenId kFirstWordId = 2;

/// Frequency-ranked word table. Word at index i of `words()` has id i + 2.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::size_t max_words, std::vector<std::string> words);

  TokenId id_of(std::string_view word) const;
  std::size_t max_words() const { return max_words_; }
  /// Number of content words (excludes the two reserved ids).
  std::size_t size() const { return words_.size(); }
  /// Rows an embedding table needs: size() + 2.
  std::size_t id_space() const { return words_.size() + kFirstWordId; }
  const std::vector<std::string>& words() const { return words_; }

  /// {"max_words": N, "words": [...]}
  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.max_words_ == b.max_words_ && a.words_ == b.words_;
  }

 private:
  std::size_t max_words_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Streaming frequency counter. Ties rank by first occurrence.
class VocabBuilder {
 public:
  void add(std::span<const std::string> tokens);
  /// Distinct tokens seen so far.
  std::size_t distinct() const { return entries_.size(); }
  std::size_t total_tokens() const { return total_; }
  /// Throws DataError("no tokens") when nothing was added.
  Vocabulary build(std::size_t max_words) const;

 private:
  struct Entry {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Entry> entries_;
  std::size_t total_ = 0;
};

Vocabulary build_vocab(std::span<const TokenSequence> streams, std::size_t max_words);

/// Token ids, same length as the input; unknown words map to kOovId.
std::vector<TokenId> encode(std::span<const std::string> tokens, const Vocabulary& vocab);

/// Left-pads with kPadId or keeps the last `maxlen` ids.
std::vector<TokenId> pad(std::span<const TokenId> ids, std::size_t maxlen);

/// Trim + lowercase, then fake -> 0 / real -> 1. Throws DataError("unknown label").
int encode_label(std::string_view label);

struct EncodedExample {
  std::vector<TokenId> ids;
  int label = 0;
};

}  // namespace fakenews
