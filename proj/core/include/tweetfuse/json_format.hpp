#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace tweetfuse {

/// Scientific notation with 17 significant digits ("%.16e"); parses back
/// to the identical double.
std::string format_double(double value);

/// `[a, b, ...]` using format_double for each element.
void write_double_array(std::ostream& out, std::span<const double> values);

}  // namespace tweetfuse
