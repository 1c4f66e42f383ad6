#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tweetfuse/linear_model.hpp"
#include "tweetfuse/normalize.hpp"
#include "tweetfuse/pipeline.hpp"

namespace tweetfuse::cli {

/// Everything a command may need, loaded from an INI file and then
/// overridden by flags.
///
///   [data]       train, val, test, embeddings
///   [normalize]  hashtag_segmentation, corona_mode, strip_emoji, lowercase,
///                extra_corona_variants (comma separated)
///   [features]   ensemble, tfidf_max_features
///   [train]      loss, epochs, eta0, lambda, seed
///   [sweep]      seeds, max_features, ensembles (comma separated), threads
///   [embedder]   kind (file|hash), dim, seed
struct RunConfig {
  std::filesystem::path train_path;
  std::filesystem::path val_path;
  std::filesystem::path test_path;
  std::filesystem::path embeddings_path;

  NormalizationConfig normalization;

  std::string ensemble = "prob+tfidf";
  std::size_t tfidf_max_features = 6000;

  std::optional<LossKind> loss;  // default_loss() of the features when unset
  Hyperparams hyper;
  std::uint64_t seed = 1;

  std::vector<std::uint64_t> sweep_seeds{1, 2, 3, 4, 5};
  std::vector<std::size_t> sweep_max_features{6000};
  std::vector<std::string> sweep_ensembles{"prob+tfidf"};
  unsigned threads = 1;

  std::optional<EmbedderKind> embedder_kind;  // file when an embeddings path is set, else hash
  std::size_t embedder_dim = 64;
  std::uint64_t embedder_seed = 0;

  FeatureConfig features() const;
  EmbedderSpec embedder() const;
};

/// Throws Error naming the file and key on unknown sections, unknown keys
/// or unparsable values.
RunConfig load_run_config(const std::filesystem::path& path);

std::vector<std::string> split_list(const std::string& text);
bool parse_bool(const std::string& key, const std::string& value);
std::uint64_t parse_uint(const std::string& key, const std::string& value);
double parse_real(const std::string& key, const std::string& value);

}  // namespace tweetfuse::cli
