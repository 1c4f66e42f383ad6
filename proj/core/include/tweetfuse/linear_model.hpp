#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetfuse/normalize.hpp"
#include "tweetfuse/numeric_feature.hpp"
#include "tweetfuse/sparse_vector.hpp"

namespace tweetfuse {

enum class LossKind { Hinge, Logistic };

std::string_view to_string(LossKind loss);
std::optional<LossKind> parse_loss_kind(std::string_view text);

/// Which feature blocks feed the linear layer.
struct FeatureConfig {
  bool use_embedding = true;
  bool use_tfidf = true;
  bool use_prob = true;
  std::size_t tfidf_max_features = 6000;

  /// Throws ContractViolation when every source is disabled.
  void validate() const;

  bool operator==(const FeatureConfig&) const = default;
};

/// Named configurations: "embedding" (transformer alone), "prob",
/// "tfidf", "prob+tfidf" (the three fusion ensembles) and "svm" (TF-IDF
/// only, the linear SVM baseline).
std::optional<FeatureConfig> ensemble_preset(std::string_view name, std::size_t tfidf_max_features = 6000);
std::span<const std::string_view> ensemble_names();

/// The concatenated feature space: [embedding | tfidf | prob].
struct FeatureLayout {
  FeatureConfig config;
  std::size_t embedding_dim = 0;
  std::size_t tfidf_dim = 0;

  std::size_t dimension() const;

  /// A single dense block of `dim` columns, for callers that hand train()
  /// ready-made vectors.
  static FeatureLayout dense(std::size_t dim);
};

/// The three optional feature blocks of one tweet. Absent means not
/// computed; disabled blocks are ignored even when present.
struct FeatureSources {
  std::optional<std::span<const double>> embedding;
  const SparseVector* tfidf = nullptr;
  std::optional<ProbFeature> prob;
};

/// Embedding, then densified TF-IDF, then the PROB scalar. Throws
/// ContractViolation naming the first enabled source that is missing.
std::vector<double> concat_features(const FeatureSources& sources, const FeatureConfig& config);

struct Hyperparams {
  std::size_t epochs = 20;
  double eta0 = 0.1;
  double lambda = 1e-4;

  bool operator==(const Hyperparams&) const = default;
};

struct LinearModel {
  static constexpr int kFormatVersion = 1;

  std::vector<double> weights;
  double bias = 0.0;
  FeatureLayout layout;
  LossKind loss = LossKind::Logistic;
  std::uint64_t seed = 0;
  Hyperparams train_meta;
};

struct Example {
  std::vector<double> x;
  Label y;
};

/// +1 for INFORMATIVE, -1 otherwise.
inline int label_sign(Label label) { return label == Label::Informative ? 1 : -1; }

/// Per-example objective: loss(y * (w.x + b)) + lambda/2 * |w|^2.
double example_objective(LossKind loss, std::span<const double> w, double b, std::span<const double> x, int y,
                         double lambda);

struct Gradient {
  std::vector<double> w;
  double b = 0.0;
};

/// Analytic gradient of example_objective. At the hinge kink (margin
/// exactly 1) the zero subgradient is used.
Gradient example_gradient(LossKind loss, std::span<const double> w, double b, std::span<const double> x, int y,
                          double lambda);

/// Plain SGD with eta_t = eta0 / (1 + eta0 * lambda * t), examples
/// reshuffled every epoch from a generator seeded with `seed`. Bit-for-bit
/// deterministic for fixed inputs.
///
/// Throws TrainError for an empty or single-class dataset and
/// ContractViolation when a vector's length disagrees with the layout.
LinearModel train(std::span<const Example> dataset, LossKind loss, std::uint64_t seed, const Hyperparams& hyper,
                  const FeatureLayout& layout);

/// Same, treating the vectors as one dense block.
LinearModel train(std::span<const Example> dataset, LossKind loss, std::uint64_t seed, const Hyperparams& hyper);

struct Prediction {
  Label label;
  double score;
};

/// score = w.x + b; INFORMATIVE only when score > 0.
Prediction predict(const LinearModel& model, std::span<const double> x);

/// Versioned JSON; weights and bias carry 17 significant digits.
/// `pipeline` (if not null) is stored under "pipeline" so a model file can
/// carry the featurisation state it was trained with.
void write_model(std::ostream& out, const LinearModel& model, const nlohmann::json& pipeline = nullptr);
void write_model(const std::filesystem::path& path, const LinearModel& model,
                 const nlohmann::json& pipeline = nullptr);

struct ModelFile {
  LinearModel model;
  nlohmann::json pipeline;
};

ModelFile parse_model(const nlohmann::json& doc);
ModelFile read_model(const std::filesystem::path& path);

}  // namespace tweetfuse
