#include "stancesum/text.hpp"

#include <algorithm>
#include <array>

namespace stancesum {
namespace {

struct Decoded {
  char32_t cp = 0;
  std::size_t len = 1;
  bool valid = false;
};

Decoded decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1, false};
  }
  if (i + len > s.size()) return {0xFFFD, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms and surrogates are treated as invalid.
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {0xFFFD, 1, false};
  }
  return {cp, len, true};
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0xA0 || (c >= 0x2000 && c <= 0x200B) ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) ||
         c == 0xFE0F || c == 0x200D;
}

bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

// Letters, digits and underscore; non-ASCII code points count as letters
// unless they are spacing, punctuation, symbols or emoji.
bool is_word_cp(char32_t c) {
  if (c < 0x80) return is_ascii_alnum(c) || c == '_';
  if (c == 0xFFFD || is_space(c) || is_emoji(c)) return false;
  if (c >= 0xA1 && c <= 0xBF) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2010 && c <= 0x206F) return false;
  if (c >= 0x20A0 && c <= 0x20CF) return false;
  if (c >= 0x2190 && c <= 0x23FF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFF01 && c <= 0xFF0F) return false;
  return true;
}

bool is_handle_byte(char c) {
  return is_ascii_alnum(static_cast<unsigned char>(c)) || c == '_';
}

bool starts_with_ci(std::string_view s, std::size_t i, std::string_view prefix) {
  if (i + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[i + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

constexpr std::array<std::string_view, 22> kEmoticons = {
    ":-)", ":-(", ":-D", ":-P", ":-p", ";-)", ":'(", ":)", ":(", ":D",
    ":P",  ":p",  ";)",  ":/",  ":|",  ":o",  ":O",  "<3", "</3", "^_^",
    "-_-", ":*"};

constexpr std::array<std::string_view, 18> kTopLevelDomains = {
    "com", "org", "net", "co", "ly", "io", "gov", "edu", "me",
    "us",  "uk",  "info", "tv", "gl", "be", "ca", "de", "news"};

std::size_t match_emoticon(std::string_view s, std::size_t i) {
  std::size_t best = 0;
  for (auto e : kEmoticons) {
    if (e.size() > best && s.substr(i, e.size()) == e) best = e.size();
  }
  if (best == 0) return 0;
  if (i + best < s.size() && is_ascii_alnum(static_cast<unsigned char>(s[i + best]))) {
    return 0;
  }
  return best;
}

std::size_t next_space(std::string_view s, std::size_t i) {
  while (i < s.size()) {
    const Decoded d = decode_at(s, i);
    if (is_space(d.cp) && d.valid) break;
    i += d.len;
  }
  return i;
}

// Matches label(.label)+ with a known final label and an optional /path.
std::size_t match_domain(std::string_view s, std::size_t i) {
  auto label_char = [](char c) {
    return is_ascii_alnum(static_cast<unsigned char>(c)) || c == '-';
  };
  std::size_t pos = i;
  std::size_t labels = 0;
  std::size_t last_label_start = i;
  while (true) {
    const std::size_t start = pos;
    while (pos < s.size() && label_char(s[pos])) ++pos;
    if (pos == start) return 0;
    ++labels;
    last_label_start = start;
    if (pos + 1 < s.size() && s[pos] == '.' && label_char(s[pos + 1])) {
      ++pos;
      continue;
    }
    break;
  }
  if (labels < 2) return 0;
  std::string tld(s.substr(last_label_start, pos - last_label_start));
  std::transform(tld.begin(), tld.end(), tld.begin(),
                 [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; });
  if (std::find(kTopLevelDomains.begin(), kTopLevelDomains.end(), tld) ==
      kTopLevelDomains.end()) {
    return 0;
  }
  if (pos < s.size()) {
    const Decoded d = decode_at(s, pos);
    if (is_word_cp(d.cp)) return 0;
    if (s[pos] == '/') pos = next_space(s, pos);
  }
  return pos - i;
}

// Length of a word or number run starting at i.
std::size_t match_word(std::string_view s, std::size_t i) {
  std::size_t pos = i;
  bool first = true;
  while (pos < s.size()) {
    const Decoded d = decode_at(s, pos);
    if (is_word_cp(d.cp)) {
      pos += d.len;
      first = false;
      continue;
    }
    if (first) break;
    const char c = s[pos];
    if (c == '*') {
      ++pos;
      continue;
    }
    if ((c == '\'' || c == '-') && pos + 1 < s.size()) {
      if (is_word_cp(decode_at(s, pos + 1).cp)) {
        ++pos;
        continue;
      }
    }
    if ((c == '.' || c == ',') && pos + 1 < s.size() &&
        is_digit(static_cast<unsigned char>(s[pos - 1])) &&
        is_digit(static_cast<unsigned char>(s[pos + 1]))) {
      ++pos;
      continue;
    }
    break;
  }
  return pos - i;
}

bool all_numeric(std::string_view w) {
  return std::all_of(w.begin(), w.end(),
                     [](char c) { return is_digit(static_cast<unsigned char>(c)) || c == '.' || c == ','; });
}

char32_t lower_cp(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x137) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x139 && c <= 0x148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 0x3F;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  return c;
}

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "word";
    case TokenKind::kHashtag: return "hashtag";
    case TokenKind::kMention: return "mention";
    case TokenKind::kUrl: return "url";
    case TokenKind::kEmoticon: return "emoticon";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kNumber: return "number";
    case TokenKind::kRetweetMarker: return "retweet-marker";
  }
  return "unknown";
}

std::vector<char32_t> utf8_decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_at(text, i);
    out.push_back(d.cp);
    i += d.len;
  }
  return out;
}

std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++n) i += decode_at(text, i).len;
  return n;
}

std::string utf8_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_at(text, i);
    if (!d.valid) {
      out.push_back(text[i]);  // keep invalid bytes verbatim
    } else {
      out += utf8_encode(lower_cp(d.cp));
    }
    i += d.len;
  }
  return out;
}

TokenStream tokenize(std::string_view s) {
  TokenStream tokens;
  std::size_t i = 0;
  auto emit = [&](std::size_t len, TokenKind kind) {
    Token t;
    t.surface = std::string(s.substr(i, len));
    t.kind = kind;
    t.offset = i;
    switch (kind) {
      case TokenKind::kWord:
      case TokenKind::kHashtag:
      case TokenKind::kMention:
        t.norm = utf8_lower(t.surface);
        break;
      case TokenKind::kRetweetMarker:
        t.norm = "rt";
        break;
      default:
        t.norm = t.surface;
    }
    tokens.push_back(std::move(t));
    i += len;
  };

  while (i < s.size()) {
    const Decoded d = decode_at(s, i);
    if (d.valid && is_space(d.cp)) {
      i += d.len;
      continue;
    }
    if (starts_with_ci(s, i, "http://") || starts_with_ci(s, i, "https://") ||
        starts_with_ci(s, i, "www.")) {
      emit(next_space(s, i) - i, TokenKind::kUrl);
      continue;
    }
    const char c = s[i];
    if (c == '#' && i + 1 < s.size() && is_word_cp(decode_at(s, i + 1).cp)) {
      std::size_t pos = i + 1;
      while (pos < s.size()) {
        const Decoded w = decode_at(s, pos);
        if (!is_word_cp(w.cp)) break;
        pos += w.len;
      }
      emit(pos - i, TokenKind::kHashtag);
      continue;
    }
    if (c == '@' && i + 1 < s.size() && is_handle_byte(s[i + 1])) {
      std::size_t pos = i + 1;
      while (pos < s.size() && is_handle_byte(s[pos])) ++pos;
      emit(pos - i, TokenKind::kMention);
      continue;
    }
    if (const std::size_t len = match_emoticon(s, i); len > 0) {
      emit(len, TokenKind::kEmoticon);
      continue;
    }
    if (d.valid && is_emoji(d.cp)) {
      std::size_t pos = i;
      while (pos < s.size()) {
        const Decoded e = decode_at(s, pos);
        if (!e.valid || !is_emoji(e.cp)) break;
        pos += e.len;
      }
      emit(pos - i, TokenKind::kEmoticon);
      continue;
    }
    if (is_word_cp(d.cp)) {
      if (const std::size_t len = match_domain(s, i); len > 0) {
        emit(len, TokenKind::kUrl);
        continue;
      }
      const std::size_t len = match_word(s, i);
      const std::string_view word = s.substr(i, len);
      TokenKind kind = all_numeric(word) ? TokenKind::kNumber : TokenKind::kWord;
      if (tokens.empty() && (word == "RT" || word == "rt")) {
        std::size_t pos = i + len;
        while (pos < s.size()) {
          const Decoded sp = decode_at(s, pos);
          if (!sp.valid || !is_space(sp.cp)) break;
          pos += sp.len;
        }
        if (pos + 1 < s.size() && s[pos] == '@' && is_handle_byte(s[pos + 1])) {
          kind = TokenKind::kRetweetMarker;
        }
      }
      emit(len, kind);
      continue;
    }
    emit(d.len, TokenKind::kPunctuation);
  }
  return tokens;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  for (const Token& t : tokenize(text)) {
    if (!out.empty()) out.push_back(' ');
    out += t.surface;
  }
  return out;
}

}  // namespace stancesum
