#pragma once

#include <string>
#include <string_view>

namespace tweetfuse {

/// Porter (1980) suffix-stripping stemmer, original rule set without the
/// later reference-implementation departures. Expects a lowercase word.
/// There is no short-word guard, so "s" stems to "". Bytes outside a-z
/// count as consonants.
std::string porter_stem(std::string_view word);

}  // namespace tweetfuse
