#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers and the fixed character tables the normalizer relies on.
// Case mapping is ASCII-only; everything else is classified by code point.
namespace tweetfuse::unicode {

/// One decoded unit of a UTF-8 string. Invalid bytes decode to a single
/// unit with `valid == false` and `cp == 0xFFFD`; `bytes` always holds the
/// original encoding so re-encoding is lossless.
struct CodeUnit {
  char32_t cp;
  std::string_view bytes;
  bool valid;
};

std::vector<CodeUnit> decode(std::string_view text);

void append_utf8(std::string& out, char32_t cp);

/// Number of decoded units (code points, counting each invalid byte once).
std::size_t length(std::string_view text);

bool is_decimal_digit(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);

/// Code points in the embedded emoji table (pictographs, emoticons,
/// transport, flags, dingbats, variation selectors, keycap combiner, tags).
/// U+200D is handled contextually by strip_emoji, not here.
bool is_emoji(char32_t cp);

inline bool is_ascii_upper(char32_t cp) { return cp >= U'A' && cp <= U'Z'; }
inline bool is_ascii_lower(char32_t cp) { return cp >= U'a' && cp <= U'z'; }

std::string ascii_lower(std::string_view text);

/// Splits on Unicode whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace tweetfuse::unicode
