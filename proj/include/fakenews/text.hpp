#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fakenews {

/// Cleaned text: Bangla-block letters, lowercase ASCII alphanumerics and
/// single interior spaces only.
struct CleanText {
  std::string value;
};

using TokenSequence = std::vector<std::string>;

/// Replaces every code point outside U+0980..U+09FF and [A-Za-z0-9] with a
/// space, lowercases ASCII, collapses whitespace runs and trims. Bytes that
/// are not valid UTF-8 are treated like any other disallowed character.
CleanText clean_text(std::string_view raw);

/// Splits on single spaces. Empty input yields no tokens.
TokenSequence tokenize(const CleanText& clean);

enum class LemmaMode { identity, suffix_strip };

LemmaMode parse_lemma_mode(std::string_view name);
std::string_view to_string(LemmaMode mode);

/// Rule-based inflection stripper. Each token loses at most one suffix,
/// longest listed suffix first; a token that would become empty is kept whole.
class Lemmatizer {
 public:
  /// Identity lemmatizer.
  Lemmatizer() = default;
  Lemmatizer(LemmaMode mode, std::vector<std::string> suffixes);

  /// Suffix list from a UTF-8 file, one suffix per line. Blank lines and lines
  /// starting with '#' are ignored.
  static std::vector<std::string> read_suffix_file(const std::filesystem::path& path);
  /// The suffix list shipped in resources/bangla_suffixes.txt.
  static const std::vector<std::string>& default_suffixes();

  TokenSequence apply(TokenSequence tokens) const;
  std::string apply_one(std::string token) const;

  LemmaMode mode() const { return mode_; }
  /// Suffixes sorted longest first (byte length, then lexicographic).
  const std::vector<std::string>& suffixes() const { return suffixes_; }

 private:
  LemmaMode mode_ = LemmaMode::identity;
  std::vector<std::string> suffixes_;
};

TokenSequence lemmatize(TokenSequence tokens, LemmaMode mode);

/// Which document columns feed the model.
enum class TextSource { headline, content, both };

TextSource parse_text_source(std::string_view name);
std::string_view to_string(TextSource source);

/// headline, content, or headline + " " + content.
std::string select_text(std::string_view headline, std::string_view content,
                        TextSource source);

/// clean -> tokenize -> lemmatize.
TokenSequence preprocess(std::string_view raw, const Lemmatizer& lemmatizer);

}  // namespace fakenews
