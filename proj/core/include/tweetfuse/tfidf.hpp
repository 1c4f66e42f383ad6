#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetfuse/normalize.hpp"
#include "tweetfuse/sparse_vector.hpp"

namespace tweetfuse {

/// Fitted vocabulary and smoothed idf weights. Immutable once built, so a
/// single instance can serve concurrent transform calls.
///
/// Column order is lexicographic over the selected terms. Selection keeps
/// the `max_features` terms with the highest document frequency, ties
/// broken by ascending term.
class TfidfModel {
 public:
  static constexpr int kFormatVersion = 1;

  /// Builds a model from explicit parts; validates every invariant.
  TfidfModel(std::vector<std::string> terms, std::vector<double> idf, std::size_t max_features,
             std::size_t corpus_size);

  std::size_t size() const { return terms_.size(); }
  std::size_t max_features() const { return max_features_; }
  std::size_t corpus_size() const { return corpus_size_; }

  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  std::optional<std::size_t> index_of(std::string_view term) const;

  nlohmann::json to_json() const;
  /// Throws ParseError on schema or invariant violations.
  static TfidfModel from_json(const nlohmann::json& doc);

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_features_;
  std::size_t corpus_size_;
};

/// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
/// Throws FitError on an empty corpus, ContractViolation on max_features 0.
TfidfModel fit_tfidf(std::span<const TokenStream> corpus, std::size_t max_features);

/// Raw-count tf times idf over in-vocabulary terms, L2-normalised; the zero
/// vector when nothing is in vocabulary.
SparseVector transform_tfidf(const TfidfModel& model, const TokenStream& stream);

void write_tfidf_model(const std::filesystem::path& path, const TfidfModel& model);
TfidfModel read_tfidf_model(const std::filesystem::path& path);

}  // namespace tweetfuse
