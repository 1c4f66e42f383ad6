#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "tweetfuse/normalize.hpp"

namespace tweetfuse {

/// Tweets in file order. `has_header` records whether the source carried
/// the "Id<TAB>Text<TAB>Label" header so writers can mirror it.
struct Dataset {
  std::vector<Tweet> tweets;
  bool has_header = false;

  bool fully_labeled() const;
};

/// Reads Id<TAB>Text[<TAB>Label] lines. A first line whose first field is
/// literally "Id" is treated as a header. Throws ParseError naming the
/// 1-based line on malformed rows, duplicate ids, blank text or unknown
/// labels.
Dataset parse_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

/// Writes rows as Id<TAB>Text<TAB>Label (label column empty when absent).
void write_dataset(std::ostream& out, const Dataset& dataset);

}  // namespace tweetfuse
