#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "fakenews/dataset.hpp"
#include "fakenews/text.hpp"
#include "fakenews/vectorizer.hpp"

namespace fakenews {

/// Document -> tokens -> fixed-length ids, with the settings a model was trained with.
class TextEncoder {
 public:
  TextEncoder(TextSource source, Lemmatizer lemmatizer, std::size_t seq_len)
      : source_(source), lemmatizer_(std::move(lemmatizer)), seq_len_(seq_len) {}

  TokenSequence tokens(std::string_view headline, std::string_view content) const;
  TokenSequence tokens(const Document& doc) const { return tokens(doc.headline, doc.content); }

  std::vector<TokenId> ids(std::string_view headline, std::string_view content,
                           const Vocabulary& vocab) const;
  EncodedExample encode(const Document& doc, const Vocabulary& vocab) const;
  std::vector<EncodedExample> encode_all(const Corpus& corpus, const Vocabulary& vocab) const;

  /// Streams every document of `corpus` through a VocabBuilder.
  void count(const Corpus& corpus, VocabBuilder& builder) const;

  std::size_t seq_len() const { return seq_len_; }

 private:
  TextSource source_;
  Lemmatizer lemmatizer_;
  std::size_t seq_len_;
};

}  // namespace fakenews
