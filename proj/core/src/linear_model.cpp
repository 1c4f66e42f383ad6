#include "tweetfuse/linear_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "tweetfuse/error.hpp"
#include "tweetfuse/json_format.hpp"

namespace tweetfuse {
namespace {

constexpr std::array<std::string_view, 5> kEnsembleNames{"embedding", "prob", "tfidf", "prob+tfidf", "svm"};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> w) { return dot(w, w); }

double loss_value(LossKind loss, double margin) {
  if (loss == LossKind::Hinge) return std::max(0.0, 1.0 - margin);
  // log(1 + exp(-m)) without overflow for large |m|.
  return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

// d loss / d margin.
double loss_slope(LossKind loss, double margin) {
  if (loss == LossKind::Hinge) return margin < 1.0 ? -1.0 : 0.0;
  if (margin > 0) {
    const double e = std::exp(-margin);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(margin));
}

struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
  int y;
};

// Uniform integer in [0, n) from raw mt19937_64 output by rejection, so
// shuffles do not depend on the standard library's distribution code.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[bounded(rng, i)]);
  }
}

void require_finite(const LinearModel& model) {
  const bool ok = std::isfinite(model.bias) &&
                  std::all_of(model.weights.begin(), model.weights.end(), [](double v) { return std::isfinite(v); });
  if (!ok) throw TrainError("training diverged: non-finite parameters (lower eta0)");
}

nlohmann::json feature_config_json(const FeatureLayout& layout) {
  return {{"use_embedding", layout.config.use_embedding},
          {"use_tfidf", layout.config.use_tfidf},
          {"use_prob", layout.config.use_prob},
          {"tfidf_max_features", layout.config.tfidf_max_features},
          {"embedding_dim", layout.embedding_dim},
          {"tfidf_dim", layout.tfidf_dim}};
}

}  // namespace

std::string_view to_string(LossKind loss) { return loss == LossKind::Hinge ? "HINGE" : "LOGISTIC"; }

std::optional<LossKind> parse_loss_kind(std::string_view text) {
  if (text == "hinge" || text == "HINGE") return LossKind::Hinge;
  if (text == "logistic" || text == "LOGISTIC") return LossKind::Logistic;
  return std::nullopt;
}

void FeatureConfig::validate() const {
  if (!use_embedding && !use_tfidf && !use_prob) throw ContractViolation("FeatureConfig: no feature source enabled");
  if (use_tfidf && tfidf_max_features == 0) throw ContractViolation("FeatureConfig: tfidf_max_features must be positive");
}

std::optional<FeatureConfig> ensemble_preset(std::string_view name, std::size_t tfidf_max_features) {
  const auto make = [&](bool embedding, bool tfidf, bool prob) {
    return FeatureConfig{embedding, tfidf, prob, tfidf_max_features};
  };
  if (name == "embedding") return make(true, false, false);
  if (name == "prob") return make(true, false, true);
  if (name == "tfidf") return make(true, true, false);
  if (name == "prob+tfidf") return make(true, true, true);
  if (name == "svm") return make(false, true, false);
  return std::nullopt;
}

std::span<const std::string_view> ensemble_names() { return kEnsembleNames; }

std::size_t FeatureLayout::dimension() const {
  return (config.use_embedding ? embedding_dim : 0) + (config.use_tfidf ? tfidf_dim : 0) + (config.use_prob ? 1 : 0);
}

FeatureLayout FeatureLayout::dense(std::size_t dim) {
  FeatureLayout layout;
  layout.config = {true, false, false, 0};
  layout.embedding_dim = dim;
  return layout;
}

std::vector<double> concat_features(const FeatureSources& sources, const FeatureConfig& config) {
  config.validate();
  if (config.use_embedding && !sources.embedding) throw ContractViolation("concat_features: embedding enabled but missing");
  if (config.use_tfidf && !sources.tfidf) throw ContractViolation("concat_features: tfidf enabled but missing");
  if (config.use_prob && !sources.prob) throw ContractViolation("concat_features: prob enabled but missing");

  std::vector<double> out;
  std::size_t dim = 0;
  if (config.use_embedding) dim += sources.embedding->size();
  if (config.use_tfidf) dim += sources.tfidf->dim;
  if (config.use_prob) dim += 1;
  out.reserve(dim);

  if (config.use_embedding) out.insert(out.end(), sources.embedding->begin(), sources.embedding->end());
  if (config.use_tfidf) {
    const auto offset = out.size();
    out.resize(offset + sources.tfidf->dim, 0.0);
    for (std::size_t k = 0; k < sources.tfidf->nnz(); ++k) {
      out[offset + sources.tfidf->indices[k]] = sources.tfidf->values[k];
    }
  }
  if (config.use_prob) out.push_back(sources.prob->value);
  return out;
}

double example_objective(LossKind loss, std::span<const double> w, double b, std::span<const double> x, int y,
                         double lambda) {
  if (w.size() != x.size()) throw ContractViolation("example_objective: dimension mismatch");
  const double margin = y * (dot(w, x) + b);
  return loss_value(loss, margin) + 0.5 * lambda * squared_norm(w);
}

Gradient example_gradient(LossKind loss, std::span<const double> w, double b, std::span<const double> x, int y,
                          double lambda) {
  if (w.size() != x.size()) throw ContractViolation("example_gradient: dimension mismatch");
  const double margin = y * (dot(w, x) + b);
  const double g = loss_slope(loss, margin) * y;
  Gradient grad;
  grad.w.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) grad.w[i] = lambda * w[i] + g * x[i];
  grad.b = g;
  return grad;
}

LinearModel train(std::span<const Example> dataset, LossKind loss, std::uint64_t seed, const Hyperparams& hyper,
                  const FeatureLayout& layout) {
  if (dataset.empty()) throw TrainError("train: empty dataset");
  if (!(hyper.eta0 > 0.0) || !(hyper.lambda >= 0.0)) throw ContractViolation("train: need eta0 > 0 and lambda >= 0");
  const std::size_t dim = layout.dimension();

  std::vector<SparseRow> rows;
  rows.reserve(dataset.size());
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& ex : dataset) {
    if (ex.x.size() != dim) {
      throw ContractViolation("train: example has " + std::to_string(ex.x.size()) + " features, layout expects " +
                              std::to_string(dim));
    }
    SparseRow row;
    row.y = label_sign(ex.y);
    (row.y > 0 ? has_pos : has_neg) = true;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!std::isfinite(ex.x[i])) throw ContractViolation("train: non-finite feature value");
      if (ex.x[i] != 0.0) {
        row.index.push_back(static_cast<std::uint32_t>(i));
        row.value.push_back(ex.x[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  if (!has_pos || !has_neg) throw TrainError("train: dataset contains a single class");

  // w = scale * v keeps the L2 decay O(1) per step.
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double bias = 0.0;

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::uint64_t t = 0;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle(order, rng);
    for (const std::size_t idx : order) {
      const auto& row = rows[idx];
      const double eta = hyper.eta0 / (1.0 + hyper.eta0 * hyper.lambda * static_cast<double>(t));
      ++t;

      double score = 0.0;
      for (std::size_t k = 0; k < row.index.size(); ++k) score += v[row.index[k]] * row.value[k];
      score = scale * score + bias;
      const double g = loss_slope(loss, row.y * score) * row.y;

      const double decay = 1.0 - eta * hyper.lambda;
      if (decay > 0.0) {
        scale *= decay;
      } else {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      }
      if (g != 0.0) {
        const double step = eta * g / scale;
        for (std::size_t k = 0; k < row.index.size(); ++k) v[row.index[k]] -= step * row.value[k];
        bias -= eta * g;
      }
      if (scale < 1e-9) {
        for (double& x : v) x *= scale;
        scale = 1.0;
      }
    }
  }

  LinearModel model;
  model.weights.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) model.weights[i] = scale * v[i];
  model.bias = bias;
  model.layout = layout;
  model.loss = loss;
  model.seed = seed;
  model.train_meta = hyper;
  require_finite(model);
  return model;
}

LinearModel train(std::span<const Example> dataset, LossKind loss, std::uint64_t seed, const Hyperparams& hyper) {
  const std::size_t dim = dataset.empty() ? 0 : dataset.front().x.size();
  return train(dataset, loss, seed, hyper, FeatureLayout::dense(dim));
}

Prediction predict(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) {
    throw ContractViolation("predict: input has " + std::to_string(x.size()) + " features, model expects " +
                            std::to_string(model.weights.size()));
  }
  const double score = dot(model.weights, x) + model.bias;
  return {score > 0.0 ? Label::Informative : Label::Uninformative, score};
}

void write_model(std::ostream& out, const LinearModel& model, const nlohmann::json& pipeline) {
  const nlohmann::json meta = {{"epochs", model.train_meta.epochs},
                               {"eta0", model.train_meta.eta0},
                               {"lambda", model.train_meta.lambda},
                               {"schedule", "inverse_scaling"}};
  out << "{\n";
  out << "  \"version\": " << LinearModel::kFormatVersion << ",\n";
  out << "  \"loss_kind\": \"" << to_string(model.loss) << "\",\n";
  out << "  \"feature_config\": " << feature_config_json(model.layout).dump() << ",\n";
  out << "  \"seed\": " << model.seed << ",\n";
  out << "  \"train_meta\": " << meta.dump() << ",\n";
  if (!pipeline.is_null()) out << "  \"pipeline\": " << pipeline.dump() << ",\n";
  out << "  \"bias\": " << format_double(model.bias) << ",\n";
  out << "  \"weights\": ";
  write_double_array(out, model.weights);
  out << "\n}\n";
}

void write_model(const std::filesystem::path& path, const LinearModel& model, const nlohmann::json& pipeline) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_model(out, model, pipeline);
  if (!out) throw Error("write failed: " + path.string());
}

ModelFile parse_model(const nlohmann::json& doc) {
  try {
    if (doc.at("version").get<int>() != LinearModel::kFormatVersion) {
      throw ParseError("unsupported model version " + doc.at("version").dump(), 0);
    }
    ModelFile file;
    auto& m = file.model;
    const auto loss = parse_loss_kind(doc.at("loss_kind").get<std::string>());
    if (!loss) throw ParseError("unknown loss_kind " + doc.at("loss_kind").dump(), 0);
    m.loss = *loss;
    const auto& fc = doc.at("feature_config");
    m.layout.config.use_embedding = fc.at("use_embedding").get<bool>();
    m.layout.config.use_tfidf = fc.at("use_tfidf").get<bool>();
    m.layout.config.use_prob = fc.at("use_prob").get<bool>();
    m.layout.config.tfidf_max_features = fc.at("tfidf_max_features").get<std::size_t>();
    m.layout.embedding_dim = fc.value("embedding_dim", std::size_t{0});
    m.layout.tfidf_dim = fc.value("tfidf_dim", std::size_t{0});
    m.seed = doc.at("seed").get<std::uint64_t>();
    const auto& meta = doc.at("train_meta");
    m.train_meta.epochs = meta.at("epochs").get<std::size_t>();
    m.train_meta.eta0 = meta.at("eta0").get<double>();
    m.train_meta.lambda = meta.at("lambda").get<double>();
    m.bias = doc.at("bias").get<double>();
    m.weights = doc.at("weights").get<std::vector<double>>();
    if (m.weights.size() != m.layout.dimension()) {
      throw ParseError("weights length " + std::to_string(m.weights.size()) + " does not match feature layout " +
                           std::to_string(m.layout.dimension()),
                       0);
    }
    require_finite(m);
    if (auto it = doc.find("pipeline"); it != doc.end()) file.pipeline = *it;
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what(), 0);
  } catch (const TrainError& e) {
    throw ParseError(std::string("model file: ") + e.what(), 0);
  }
}

ModelFile read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  try {
    return parse_model(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace tweetfuse
