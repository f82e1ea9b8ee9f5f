#include "fakenews/pipeline.hpp"

namespace fakenews {

TokenSequence TextEncoder::tokens(std::string_view headline, std::string_view content) const {
  return preprocess(select_text(headline, content, source_), lemmatizer_);
}

std::vector<TokenId> TextEncoder::ids(std::string_view headline, std::string_view content,
                                      const Vocabulary& vocab) const {
  return pad(fakenews::encode(tokens(headline, content), vocab), seq_len_);
}

EncodedExample TextEncoder::encode(const Document& doc, const Vocabulary& vocab) const {
  return {ids(doc.headline, doc.content, vocab), static_cast<int>(doc.label)};
}

std::vector<EncodedExample> TextEncoder::encode_all(const Corpus& corpus,
                                                    const Vocabulary& vocab) const {
  std::vector<EncodedExample> out;
  out.reserve(corpus.size());
  for (const auto& d : corpus.documents) out.push_back(encode(d, vocab));
  return out;
}

void TextEncoder::count(const Corpus& corpus, VocabBuilder& builder) const {
  for (const auto& d : corpus.documents) builder.add(tokens(d));
}

}  // namespace fakenews
