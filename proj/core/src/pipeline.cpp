#include "tweetfuse/pipeline.hpp"

#include "tweetfuse/error.hpp"

namespace tweetfuse {

void EmbedderSpec::validate() const {
  if (kind == EmbedderKind::File && path.empty()) throw ContractViolation("file embedder requires an embeddings path");
  if (kind == EmbedderKind::Hash && dim == 0) throw ContractViolation("hash embedder requires dim >= 1");
}

nlohmann::json to_json(const NormalizationConfig& config) {
  return {{"hashtag_segmentation", config.hashtag_segmentation},
          {"corona_mode", std::string(to_string(config.corona_mode))},
          {"strip_emoji", config.strip_emoji},
          {"lowercase", config.lowercase},
          {"corona_variants", config.corona_variants}};
}

NormalizationConfig normalization_from_json(const nlohmann::json& doc) {
  NormalizationConfig config;
  config.hashtag_segmentation = doc.at("hashtag_segmentation").get<bool>();
  const auto mode = parse_corona_mode(doc.at("corona_mode").get<std::string>());
  if (!mode) throw ParseError("unknown corona_mode " + doc.at("corona_mode").dump(), 0);
  config.corona_mode = *mode;
  config.strip_emoji = doc.at("strip_emoji").get<bool>();
  config.lowercase = doc.at("lowercase").get<bool>();
  config.corona_variants = doc.at("corona_variants").get<std::vector<std::string>>();
  return config;
}

nlohmann::json to_json(const EmbedderSpec& spec) {
  if (spec.kind == EmbedderKind::File) return {{"kind", "file"}};
  return {{"kind", "hash"}, {"dim", spec.dim}, {"seed", spec.seed}};
}

EmbedderSpec embedder_from_json(const nlohmann::json& doc) {
  EmbedderSpec spec;
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "file") {
    spec.kind = EmbedderKind::File;
  } else if (kind == "hash") {
    spec.kind = EmbedderKind::Hash;
    spec.dim = doc.at("dim").get<std::size_t>();
    spec.seed = doc.at("seed").get<std::uint64_t>();
  } else {
    throw ParseError("unknown embedder kind \"" + kind + "\"", 0);
  }
  return spec;
}

TokenStream tfidf_tokens(const Tweet& tweet, const NormalizationConfig& config) {
  NormalizationConfig lowered = config;
  lowered.lowercase = true;
  return tfidf_preprocess(normalize(tweet, lowered));
}

PreparedSplit prepare_split(const Dataset& dataset, const NormalizationConfig& config, const EmbedderSpec* embedder,
                            const EmbeddingMap* embeddings) {
  if (embedder) {
    embedder->validate();
    if (embedder->kind == EmbedderKind::File && !embeddings) {
      throw ContractViolation("prepare_split: file embedder needs loaded embeddings");
    }
  }
  PreparedSplit split;
  split.rows.reserve(dataset.tweets.size());
  if (embedder) {
    split.embedding_dim = embedder->kind == EmbedderKind::Hash ? embedder->dim : embedding_dim(*embeddings);
  }

  for (const auto& tweet : dataset.tweets) {
    PreparedTweet row;
    row.id = tweet.id;
    row.label = tweet.label;
    row.text = tweet.text;
    row.tfidf_tokens = tfidf_tokens(tweet, config);
    row.prob = prob_numeric(tweet.text);
    if (embedder && embedder->kind == EmbedderKind::Hash) {
      row.embedding = hash_embed(normalize(tweet, config), embedder->dim, embedder->seed).vector;
    } else if (embedder) {
      auto it = embeddings->find(tweet.id);
      if (it == embeddings->end()) throw Error("no embedding for tweet id " + tweet.id);
      row.embedding = it->second.vector;
    }
    split.rows.push_back(std::move(row));
  }
  return split;
}

TfidfModel fit_tfidf(const PreparedSplit& split, std::size_t max_features) {
  std::vector<TokenStream> corpus;
  corpus.reserve(split.rows.size());
  for (const auto& row : split.rows) corpus.push_back(row.tfidf_tokens);
  return fit_tfidf(corpus, max_features);
}

FeatureLayout make_layout(const FeatureConfig& config, std::size_t embedding_dim, const TfidfModel* tfidf) {
  config.validate();
  if (config.use_tfidf && !tfidf) throw ContractViolation("make_layout: tfidf enabled but no model given");
  if (config.use_embedding && embedding_dim == 0) throw ContractViolation("make_layout: embedding enabled but dimension is 0");
  FeatureLayout layout;
  layout.config = config;
  layout.embedding_dim = config.use_embedding ? embedding_dim : 0;
  layout.tfidf_dim = config.use_tfidf ? tfidf->size() : 0;
  return layout;
}

std::vector<double> feature_vector(const PreparedTweet& tweet, const FeatureLayout& layout, const TfidfModel* tfidf) {
  FeatureSources sources;
  SparseVector tfidf_vec;
  if (layout.config.use_embedding) {
    if (tweet.embedding.size() != layout.embedding_dim) {
      throw ContractViolation("tweet " + tweet.id + ": embedding has " + std::to_string(tweet.embedding.size()) +
                              " components, layout expects " + std::to_string(layout.embedding_dim));
    }
    sources.embedding = std::span<const double>(tweet.embedding);
  }
  if (layout.config.use_tfidf) {
    if (!tfidf || tfidf->size() != layout.tfidf_dim) throw ContractViolation("feature_vector: tfidf model does not match layout");
    tfidf_vec = transform_tfidf(*tfidf, tweet.tfidf_tokens);
    sources.tfidf = &tfidf_vec;
  }
  if (layout.config.use_prob) sources.prob = tweet.prob;
  return concat_features(sources, layout.config);
}

std::vector<Example> build_examples(const PreparedSplit& split, const FeatureLayout& layout, const TfidfModel* tfidf) {
  std::vector<Example> examples;
  examples.reserve(split.rows.size());
  for (const auto& row : split.rows) {
    if (!row.label) throw Error("tweet " + row.id + " has no label");
    examples.push_back({feature_vector(row, layout, tfidf), *row.label});
  }
  return examples;
}

LossKind default_loss(const FeatureConfig& config) {
  return config.use_embedding ? LossKind::Logistic : LossKind::Hinge;
}

}  // namespace tweetfuse
