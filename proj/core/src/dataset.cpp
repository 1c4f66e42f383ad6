#include "tweetfuse/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "tweetfuse/error.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

bool Dataset::fully_labeled() const {
  for (const auto& t : tweets) {
    if (!t.label) return false;
  }
  return true;
}

Dataset parse_dataset(std::istream& in) {
  Dataset dataset;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t pending_blank = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      // Trailing blank lines are tolerated; interior ones are not.
      if (!pending_blank) pending_blank = line_no;
      continue;
    }
    if (pending_blank) throw ParseError("blank line", pending_blank);

    const auto fields = split_tabs(line);
    if (line_no == 1 && fields.front() == "Id") {
      dataset.has_header = true;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected 2 or 3 tab-separated fields, found " + std::to_string(fields.size()),
                       line_no);
    }

    Tweet tweet;
    tweet.id = std::string(unicode::trim(fields[0]));
    if (tweet.id.empty()) throw ParseError("empty tweet id", line_no);
    if (unicode::trim(fields[1]).empty()) throw ParseError("blank text for id " + tweet.id, line_no);
    tweet.text = std::string(fields[1]);
    if (fields.size() == 3) {
      const auto label_field = unicode::trim(fields[2]);
      if (!label_field.empty()) {
        tweet.label = parse_label(label_field);
        if (!tweet.label) throw ParseError("unknown label \"" + std::string(label_field) + "\"", line_no);
      }
    }
    if (!seen.insert(tweet.id).second) throw ParseError("duplicate id " + tweet.id, line_no);
    dataset.tweets.push_back(std::move(tweet));
  }
  return dataset;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset " + path.string());
  try {
    return parse_dataset(in);
  } catch (const ParseError& e) {
    throw e.in_context(path.string());
  }
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  if (dataset.has_header) out << "Id\tText\tLabel\n";
  for (const auto& t : dataset.tweets) {
    out << t.id << '\t' << t.text << '\t';
    if (t.label) out << to_string(*t.label);
    out << '\n';
  }
}

}  // namespace tweetfuse
