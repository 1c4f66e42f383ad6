#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetfuse/dataset.hpp"
#include "tweetfuse/embeddings.hpp"
#include "tweetfuse/linear_model.hpp"
#include "tweetfuse/normalize.hpp"
#include "tweetfuse/numeric_feature.hpp"
#include "tweetfuse/tfidf.hpp"

// Turns datasets into feature vectors: one pass computes every per-tweet
// source (embedding, TF-IDF tokens, PROB), then layouts pick blocks.
namespace tweetfuse {

enum class EmbedderKind { File, Hash };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::Hash;
  std::filesystem::path path;  // File
  std::size_t dim = 64;        // Hash
  std::uint64_t seed = 0;      // Hash

  /// File needs a path, Hash needs dim >= 1.
  void validate() const;
};

nlohmann::json to_json(const NormalizationConfig& config);
NormalizationConfig normalization_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const EmbedderSpec& spec);
EmbedderSpec embedder_from_json(const nlohmann::json& doc);

struct PreparedTweet {
  std::string id;
  std::optional<Label> label;
  std::string text;
  TokenStream tfidf_tokens;
  ProbFeature prob;
  std::vector<double> embedding;  // empty when no embedder was requested
};

struct PreparedSplit {
  std::vector<PreparedTweet> rows;
  std::size_t embedding_dim = 0;
};

/// The TF-IDF path always lowercases, whatever `config.lowercase` says.
TokenStream tfidf_tokens(const Tweet& tweet, const NormalizationConfig& config);

/// Computes all per-tweet feature sources. With a File embedder every
/// tweet id must be present in `embeddings`; pass `embedder == nullptr`
/// to skip embeddings entirely.
PreparedSplit prepare_split(const Dataset& dataset, const NormalizationConfig& config, const EmbedderSpec* embedder,
                            const EmbeddingMap* embeddings = nullptr);

/// Fits on the split's TF-IDF token streams.
TfidfModel fit_tfidf(const PreparedSplit& split, std::size_t max_features);

FeatureLayout make_layout(const FeatureConfig& config, std::size_t embedding_dim, const TfidfModel* tfidf);

std::vector<double> feature_vector(const PreparedTweet& tweet, const FeatureLayout& layout, const TfidfModel* tfidf);

/// Throws Error when a row is unlabeled.
std::vector<Example> build_examples(const PreparedSplit& split, const FeatureLayout& layout, const TfidfModel* tfidf);

/// Hinge for the TF-IDF SVM baseline (no embedding block), logistic for
/// fusion heads.
LossKind default_loss(const FeatureConfig& config);

}  // namespace tweetfuse
