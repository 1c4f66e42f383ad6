#include "tweetfuse/normalize.hpp"

#include <algorithm>

#include "tweetfuse/error.hpp"
#include "tweetfuse/porter_stemmer.hpp"
#include "tweetfuse/stopwords.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse {
namespace {

constexpr char32_t kZeroWidthJoiner = 0x200D;
constexpr char32_t kKeycapCombiner = 0x20E3;
constexpr char32_t kEmojiPresentation = 0xFE0F;

char ascii_fold(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool matches_at(std::string_view text, std::size_t pos, std::string_view pattern) {
  if (pattern.empty() || text.size() - pos < pattern.size()) return false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (ascii_fold(text[pos + k]) != ascii_fold(pattern[k])) return false;
  }
  return true;
}

bool is_keycap_base(char32_t cp) { return (cp >= U'0' && cp <= U'9') || cp == U'#' || cp == U'*'; }

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::Informative ? "INFORMATIVE" : "UNINFORMATIVE";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "INFORMATIVE") return Label::Informative;
  if (text == "UNINFORMATIVE") return Label::Uninformative;
  return std::nullopt;
}

std::string_view to_string(CoronaMode mode) {
  switch (mode) {
    case CoronaMode::Standard: return "standard";
    case CoronaMode::Disease: return "disease";
    case CoronaMode::Off: return "off";
  }
  return "off";
}

std::optional<CoronaMode> parse_corona_mode(std::string_view text) {
  const std::string lower = unicode::ascii_lower(text);
  if (lower == "standard") return CoronaMode::Standard;
  if (lower == "disease") return CoronaMode::Disease;
  if (lower == "off") return CoronaMode::Off;
  return std::nullopt;
}

const std::vector<std::string>& default_corona_variants() {
  static const std::vector<std::string> variants = [] {
    const std::vector<std::string> base{"covid-19", "covid19",      "covid 19",  "covid",
                                        "corona virus", "coronavirus", "covid_19"};
    std::vector<std::string> all;
    for (const auto& v : base) {
      // "covid_19" only appears in hashtag form.
      if (v != "covid_19") all.push_back(v);
      all.push_back("#" + v);
    }
    return all;
  }();
  return variants;
}

std::vector<std::string> segment_hashtag(std::string_view token) {
  if (token.empty() || token.front() != '#') {
    throw ContractViolation("segment_hashtag: token must start with '#': \"" + std::string(token) + "\"");
  }
  const auto units = unicode::decode(token.substr(1));
  const auto upper = [&](std::size_t i) { return unicode::is_ascii_upper(units[i].cp); };
  const auto lower = [&](std::size_t i) { return unicode::is_ascii_lower(units[i].cp); };

  std::vector<std::string> pieces{"#"};
  for (std::size_t i = 0; i < units.size(); ++i) {
    const bool boundary =
        i > 0 && upper(i) &&
        (lower(i - 1) || (upper(i - 1) && i + 1 < units.size() && lower(i + 1)));
    if (boundary) pieces.emplace_back();
    pieces.back().append(units[i].bytes);
  }
  return pieces;
}

std::string standardize_corona(std::string_view text, CoronaMode mode,
                               const std::vector<std::string>& variants) {
  if (mode == CoronaMode::Off) return std::string(text);
  const std::string_view replacement =
      mode == CoronaMode::Standard ? "coronavirus" : "coronavirus disease";

  std::vector<std::string_view> patterns(variants.begin(), variants.end());
  std::stable_sort(patterns.begin(), patterns.end(),
                   [](std::string_view a, std::string_view b) { return a.size() > b.size(); });

  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t matched = 0;
    for (auto p : patterns) {
      if (matches_at(text, pos, p)) {
        matched = p.size();
        break;
      }
    }
    if (matched) {
      out.append(replacement);
      pos += matched;
    } else {
      out.push_back(text[pos++]);
    }
  }
  return out;
}

std::string strip_emoji(std::string_view text) {
  const auto units = unicode::decode(text);
  const auto emoji_at = [&](std::size_t i) { return i < units.size() && units[i].valid && unicode::is_emoji(units[i].cp); };

  std::vector<bool> drop(units.size(), false);
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    if (!u.valid) continue;
    if (unicode::is_emoji(u.cp)) {
      drop[i] = true;
    } else if (is_keycap_base(u.cp)) {
      std::size_t j = i + 1;
      if (j < units.size() && units[j].cp == kEmojiPresentation) ++j;
      if (j < units.size() && units[j].cp == kKeycapCombiner) drop[i] = true;
    }
  }
  // A joiner belongs to an emoji sequence when it touches a dropped emoji.
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].valid && units[i].cp == kZeroWidthJoiner) {
      const bool before = i > 0 && drop[i - 1];
      if (before || emoji_at(i + 1)) drop[i] = true;
    }
  }

  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!drop[i]) out.append(units[i].bytes);
  }
  return out;
}

TokenStream normalize(const Tweet& tweet, const NormalizationConfig& config) {
  std::string text = standardize_corona(tweet.text, config.corona_mode, config.corona_variants);
  if (config.strip_emoji) text = strip_emoji(text);

  TokenStream stream;
  stream.source_id = tweet.id;
  for (auto& token : unicode::split_whitespace(text)) {
    if (config.hashtag_segmentation && token.front() == '#') {
      for (auto& piece : segment_hashtag(token)) stream.tokens.push_back(std::move(piece));
    } else {
      stream.tokens.push_back(std::move(token));
    }
  }
  if (config.lowercase) {
    for (auto& token : stream.tokens) token = unicode::ascii_lower(token);
  }
  return stream;
}

TokenStream tfidf_preprocess(const TokenStream& stream) {
  TokenStream out;
  out.source_id = stream.source_id;
  for (const auto& token : stream.tokens) {
    const std::string lower = unicode::ascii_lower(token);
    if (is_stopword(lower)) continue;

    const auto units = unicode::decode(strip_emoji(lower));
    std::string marker;
    std::string body;
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto& u = units[i];
      if (i == 0 && (u.cp == U'#' || u.cp == U'@')) {
        marker.append(u.bytes);
        continue;
      }
      if (u.valid && (unicode::is_punctuation(u.cp) || unicode::is_whitespace(u.cp) ||
                      u.cp == kZeroWidthJoiner)) {
        continue;
      }
      body.append(u.bytes);
    }
    if (body.empty() || is_stopword(body)) continue;

    std::string stem = porter_stem(body);
    if (stem.empty() || is_stopword(stem)) continue;
    out.tokens.push_back(marker + stem);
  }
  return out;
}

}  // namespace tweetfuse
