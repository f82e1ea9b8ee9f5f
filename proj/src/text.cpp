#include "fakenews/text.hpp"

#include <algorithm>
#include <fstream>

#include "fakenews/error.hpp"

namespace fakenews {
namespace {

// Returns the byte length of the code point starting at s[i] and stores it in
// `cp`, or 0 when the bytes there are not a valid UTF-8 sequence.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len;
  char32_t min;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

bool is_bangla(char32_t cp) { return cp >= 0x0980 && cp <= 0x09FF; }

}  // namespace

CleanText clean_text(std::string_view raw) {
  CleanText out;
  out.value.reserve(raw.size());
  bool pending_space = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    char32_t cp = 0;
    std::size_t len = decode_utf8(raw, i, cp);
    bool keep = false;
    if (len == 0) {
      len = 1;
    } else if (cp < 0x80) {
      const auto c = static_cast<char>(cp);
      keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    } else {
      keep = is_bangla(cp);
    }
    if (!keep) {
      pending_space = !out.value.empty();
      i += len;
      continue;
    }
    if (pending_space) out.value.push_back(' ');
    pending_space = false;
    if (len == 1) {
      char c = raw[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      out.value.push_back(c);
    } else {
      out.value.append(raw.substr(i, len));
    }
    i += len;
  }
  return out;
}

TokenSequence tokenize(const CleanText& clean) {
  TokenSequence tokens;
  std::string_view rest = clean.value;
  while (!rest.empty()) {
    const auto sp = rest.find(' ');
    if (sp == std::string_view::npos) {
      tokens.emplace_back(rest);
      break;
    }
    if (sp > 0) tokens.emplace_back(rest.substr(0, sp));
    rest.remove_prefix(sp + 1);
  }
  return tokens;
}

LemmaMode parse_lemma_mode(std::string_view name) {
  if (name == "identity") return LemmaMode::identity;
  if (name == "suffix_strip") return LemmaMode::suffix_strip;
  throw ConfigError("unknown lemmatizer mode: " + std::string(name));
}

std::string_view to_string(LemmaMode mode) {
  return mode == LemmaMode::identity ? "identity" : "suffix_strip";
}

Lemmatizer::Lemmatizer(LemmaMode mode, std::vector<std::string> suffixes)
    : mode_(mode), suffixes_(std::move(suffixes)) {
  std::erase_if(suffixes_, [](const std::string& s) { return s.empty(); });
  std::sort(suffixes_.begin(), suffixes_.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  suffixes_.erase(std::unique(suffixes_.begin(), suffixes_.end()), suffixes_.end());
}

std::vector<std::string> Lemmatizer::read_suffix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read suffix file: " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

const std::vector<std::string>& Lemmatizer::default_suffixes() {
  // Keep in sync with resources/bangla_suffixes.txt (checked by a unit test).
  static const std::vector<std::string> list = {
      "গুলোকে", "গুলোর", "গুলিকে", "গুলির", "দেরকে", "গুলো", "গুলি",
      "খানা",   "খানি",  "দের",   "টাকে",  "টিকে",  "টার",  "টির",
      "েরা",    "কে",    "তে",    "টা",    "টি",    "ের",   "রা",
  };
  return list;
}

std::string Lemmatizer::apply_one(std::string token) const {
  if (mode_ == LemmaMode::identity) return token;
  for (const auto& suffix : suffixes_) {
    if (token.size() > suffix.size() && token.ends_with(suffix)) {
      token.resize(token.size() - suffix.size());
      return token;
    }
  }
  return token;
}

TokenSequence Lemmatizer::apply(TokenSequence tokens) const {
  if (mode_ == LemmaMode::identity) return tokens;
  for (auto& t : tokens) t = apply_one(std::move(t));
  return tokens;
}

TokenSequence lemmatize(TokenSequence tokens, LemmaMode mode) {
  return Lemmatizer(mode, mode == LemmaMode::identity ? std::vector<std::string>{}
                                                      : Lemmatizer::default_suffixes())
      .apply(std::move(tokens));
}

TextSource parse_text_source(std::string_view name) {
  if (name == "headline") return TextSource::headline;
  if (name == "content") return TextSource::content;
  if (name == "both") return TextSource::both;
  throw ConfigError("unknown text source: " + std::string(name));
}

std::string_view to_string(TextSource source) {
  switch (source) {
    case TextSource::headline: return "headline";
    case TextSource::content: return "content";
    case TextSource::both: break;
  }
  return "both";
}

std::string select_text(std::string_view headline, std::string_view content,
                        TextSource source) {
  switch (source) {
    case TextSource::headline: return std::string(headline);
    case TextSource::content: return std::string(content);
    case TextSource::both: break;
  }
  std::string s;
  s.reserve(headline.size() + 1 + content.size());
  s.append(headline).push_back(' ');
  s.append(content);
  return s;
}

TokenSequence preprocess(std::string_view raw, const Lemmatizer& lemmatizer) {
  return lemmatizer.apply(tokenize(clean_text(raw)));
}

}  // namespace fakenews
