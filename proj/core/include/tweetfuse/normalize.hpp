#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetfuse {

enum class Label { Informative, Uninformative };

std::string_view to_string(Label label);
/// Accepts "INFORMATIVE" / "UNINFORMATIVE" exactly.
std::optional<Label> parse_label(std::string_view text);

struct Tweet {
  std::string id;
  std::string text;
  std::optional<Label> label;
};

enum class CoronaMode { Standard, Disease, Off };

std::string_view to_string(CoronaMode mode);
std::optional<CoronaMode> parse_corona_mode(std::string_view text);

/// The built-in corona variant patterns, hashtag-prefixed forms included.
const std::vector<std::string>& default_corona_variants();

struct NormalizationConfig {
  bool hashtag_segmentation = true;
  CoronaMode corona_mode = CoronaMode::Standard;
  bool strip_emoji = true;
  bool lowercase = false;
  /// Matched case-insensitively (ASCII), longest first. Extend to add forms.
  std::vector<std::string> corona_variants = default_corona_variants();
};

struct TokenStream {
  std::vector<std::string> tokens;
  std::string source_id;
};

/// Splits a camel-cased hashtag. The first piece keeps the '#'. Inside an
/// uppercase run the split lands before the run's last capital when a
/// lowercase letter follows ("#NHSHeroes" -> "#NHS", "Heroes").
/// Throws ContractViolation when `token` does not start with '#'.
std::vector<std::string> segment_hashtag(std::string_view token);

std::string standardize_corona(std::string_view text, CoronaMode mode,
                               const std::vector<std::string>& variants = default_corona_variants());

/// Removes emoji code points, keycap sequences (base included) and ZWJ
/// joiners that touch an emoji. Everything else is kept in order.
std::string strip_emoji(std::string_view text);

/// corona standardization -> emoji stripping -> whitespace split ->
/// hashtag segmentation -> lowercasing, each step gated by `config`.
TokenStream normalize(const Tweet& tweet, const NormalizationConfig& config);

/// Token cleanup for the TF-IDF path: lowercase, drop emoji and punctuation
/// (a leading '#' or '@' survives), drop stopwords, Porter-stem.
TokenStream tfidf_preprocess(const TokenStream& stream);

}  // namespace tweetfuse
