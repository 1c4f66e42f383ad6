#include "tweetfuse/numeric_feature.hpp"

#include <cmath>
#include <string>

#include "tweetfuse/error.hpp"
#include "tweetfuse/normalize.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse {

ProbFeature prob_numeric(std::string_view text) {
  const auto units = unicode::decode(strip_emoji(text));
  if (units.empty()) return {};
  std::size_t digits = 0;
  for (const auto& u : units) {
    if (u.valid && unicode::is_decimal_digit(u.cp)) ++digits;
  }
  return {static_cast<double>(digits) / static_cast<double>(units.size())};
}

double power_transform(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractViolation("power_transform: argument " + std::to_string(p) + " outside [0, 1]");
  }
  return std::pow(p, 0.2);
}

}  // namespace tweetfuse
