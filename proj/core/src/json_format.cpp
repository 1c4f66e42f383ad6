#include "tweetfuse/json_format.hpp"

#include <cstdio>
#include <ostream>

namespace tweetfuse {

std::string format_double(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.16e", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_double_array(std::ostream& out, std::span<const double> values) {
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ", ";
    out << format_double(values[i]);
  }
  out << ']';
}

}  // namespace tweetfuse
