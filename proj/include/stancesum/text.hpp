#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stancesum {

enum class TokenKind : std::uint8_t {
  kWord,
  kHashtag,
  kMention,
  kUrl,
  kEmoticon,
  kPunctuation,
  kNumber,
  kRetweetMarker,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  std::string surface;  // exact bytes from the input text
  std::string norm;     // lowercased form for words, hashtags and mentions
  TokenKind kind = TokenKind::kWord;
  std::size_t offset = 0;  // byte offset of surface in the input text

  bool operator==(const Token&) const = default;
};

using TokenStream = std::vector<Token>;

// Deterministic tweet tokenizer. Never fails; invalid UTF-8 bytes become
// single-byte punctuation tokens.
//
//   hashtag   '#' followed by letters, digits or '_' ("#a#b" is two hashtags)
//   mention   '@' followed by [A-Za-z0-9_]
//   url       scheme prefix (http://, https://, www.) or label.tld domain
//   retweet   leading "RT" immediately followed by a mention
TokenStream tokenize(std::string_view text);

// Token surfaces joined by single spaces. tokenize() is idempotent on this
// form: tokenize(normalize_text(t)) has the same surfaces as tokenize(t).
std::string normalize_text(std::string_view text);

// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek and
// Cyrillic. Other code points pass through unchanged.
std::string utf8_lower(std::string_view text);

// Number of Unicode code points (invalid bytes count as one each).
std::size_t utf8_length(std::string_view text);

// Decodes UTF-8 into code points; invalid bytes are mapped to U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view text);
std::string utf8_encode(char32_t code_point);

}  // namespace stancesum
