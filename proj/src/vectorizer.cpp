#include "fakenews/vectorizer.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "fakenews/error.hpp"

namespace fakenews {

Vocabulary::Vocabulary(std::size_t max_words, std::vector<std::string> words)
    : max_words_(max_words), words_(std::move(words)) {
  if (words_.size() > max_words_) {
    throw DataError("vocabulary has more words than max_words");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw DataError("vocabulary contains an empty word");
    const auto [it, inserted] =
        index_.emplace(words_[i], static_cast<TokenId>(i + kFirstWordId));
    if (!inserted) throw DataError("vocabulary contains duplicate word: " + words_[i]);
  }
}

TokenId Vocabulary::id_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? kOovId : it->second;
}

nlohmann::json Vocabulary::to_json() const {
  return {{"max_words", max_words_}, {"words", words_}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  try {
    return Vocabulary(j.at("max_words").get<std::size_t>(),
                      j.at("words").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed vocabulary JSON: ") + e.what());
  }
}

void VocabBuilder::add(std::span<const std::string> tokens) {
  for (const auto& t : tokens) {
    auto [it, inserted] = entries_.try_emplace(t);
    if (inserted) it->second.first_seen = total_;
    ++it->second.count;
    ++total_;
  }
}

Vocabulary VocabBuilder::build(std::size_t max_words) const {
  if (max_words < 1) throw ConfigError("max_words must be at least 1");
  if (entries_.empty()) throw DataError("no tokens");
  std::vector<const std::pair<const std::string, Entry>*> ranked;
  ranked.reserve(entries_.size());
  for (const auto& e : entries_) ranked.push_back(&e);
  std::sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
    if (a->second.count != b->second.count) return a->second.count > b->second.count;
    return a->second.first_seen < b->second.first_seen;
  });
  const std::size_t keep = std::min(max_words, ranked.size());
  std::vector<std::string> words;
  words.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) words.push_back(ranked[i]->first);
  return Vocabulary(max_words, std::move(words));
}

Vocabulary build_vocab(std::span<const TokenSequence> streams, std::size_t max_words) {
  VocabBuilder b;
  for (const auto& s : streams) b.add(s);
  return b.build(max_words);
}

std::vector<TokenId> encode(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id_of(t));
  return ids;
}

std::vector<TokenId> pad(std::span<const TokenId> ids, std::size_t maxlen) {
  if (maxlen < 1) throw ConfigError("maxlen must be at least 1");
  std::vector<TokenId> out(maxlen, kPadId);
  if (ids.size() >= maxlen) {
    std::copy(ids.end() - static_cast<std::ptrdiff_t>(maxlen), ids.end(), out.begin());
  } else {
    std::copy(ids.begin(), ids.end(), out.end() - static_cast<std::ptrdiff_t>(ids.size()));
  }
  return out;
}

int encode_label(std::string_view label) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = label.find_first_not_of(ws);
  std::string v;
  if (b != std::string_view::npos) {
    v = label.substr(b, label.find_last_not_of(ws) - b + 1);
  }
  for (char& c : v) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (v == "fake") return 0;
  if (v == "real") return 1;
  throw DataError("unknown label: " + std::string(label));
}

}  // namespace fakenews
