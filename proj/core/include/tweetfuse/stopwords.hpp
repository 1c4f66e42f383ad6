#pragma once

#include <span>
#include <string_view>

namespace tweetfuse {

// English stopword snapshot (the 179-word NLTK "english" list). See
// docs/stopwords.md for provenance.
std::span<const std::string_view> english_stopwords();

bool is_stopword(std::string_view lowercase_word);

}  // namespace tweetfuse
