#pragma once

#include <iosfwd>

namespace tweetfuse::cli {

/// Entry point of the `tweetfuse` tool. Returns the process exit code: 0 on
/// success, 1 when a command fails, 2 (or CLI11's code) on bad usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tweetfuse::cli
