#pragma once

#include <string_view>

namespace tweetfuse {

/// Share of characters in a tweet that are decimal digits.
struct ProbFeature {
  double value = 0.0;
};

/// Digits (Unicode Nd) over code points, both counted after strip_emoji.
/// Empty text yields 0.
ProbFeature prob_numeric(std::string_view text);

/// p^(1/5), for distribution reports only. Throws ContractViolation when p
/// is outside [0, 1].
double power_transform(double p);

}  // namespace tweetfuse
