#include "tweetfuse/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "tweetfuse/error.hpp"

namespace tweetfuse {

TfidfModel::TfidfModel(std::vector<std::string> terms, std::vector<double> idf, std::size_t max_features,
                       std::size_t corpus_size)
    : terms_(std::move(terms)), idf_(std::move(idf)), max_features_(max_features), corpus_size_(corpus_size) {
  if (max_features_ == 0) throw ContractViolation("TfidfModel: max_features must be positive");
  if (terms_.size() != idf_.size()) throw ContractViolation("TfidfModel: terms/idf size mismatch");
  if (terms_.size() > max_features_) throw ContractViolation("TfidfModel: vocabulary exceeds max_features");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(std::isfinite(idf_[i]) && idf_[i] > 0.0)) {
      throw ContractViolation("TfidfModel: idf for \"" + terms_[i] + "\" must be positive and finite");
    }
    if (!index_.emplace(terms_[i], i).second) throw ContractViolation("TfidfModel: duplicate term \"" + terms_[i] + "\"");
  }
}

std::optional<std::size_t> TfidfModel::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

nlohmann::json TfidfModel::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms.push_back({{"term", terms_[i]}, {"index", i}, {"idf", idf_[i]}});
  }
  return {{"version", kFormatVersion},
          {"max_features", max_features_},
          {"corpus_size", corpus_size_},
          {"terms", std::move(terms)}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw ParseError("unsupported tfidf model version " + doc.at("version").dump(), 0);
    }
    const auto& entries = doc.at("terms");
    std::vector<std::string> terms(entries.size());
    std::vector<double> idf(entries.size());
    std::vector<bool> filled(entries.size(), false);
    for (const auto& e : entries) {
      const auto index = e.at("index").get<std::size_t>();
      if (index >= entries.size() || filled[index]) {
        throw ParseError("tfidf model column indices are not a contiguous range from 0", 0);
      }
      filled[index] = true;
      terms[index] = e.at("term").get<std::string>();
      idf[index] = e.at("idf").get<double>();
    }
    return TfidfModel(std::move(terms), std::move(idf), doc.at("max_features").get<std::size_t>(),
                      doc.at("corpus_size").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tfidf model: ") + e.what(), 0);
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("tfidf model: ") + e.what(), 0);
  }
}

TfidfModel fit_tfidf(std::span<const TokenStream> corpus, std::size_t max_features) {
  if (max_features == 0) throw ContractViolation("fit_tfidf: max_features must be positive");
  if (corpus.empty()) throw FitError("fit_tfidf: empty corpus");

  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    std::unordered_set<std::string_view> seen(doc.tokens.begin(), doc.tokens.end());
    for (auto term : seen) ++df[std::string(term)];
  }

  std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  const auto n = static_cast<double>(corpus.size());
  std::vector<std::string> terms;
  std::vector<double> idf;
  terms.reserve(ranked.size());
  idf.reserve(ranked.size());
  for (auto& [term, count] : ranked) {
    terms.push_back(std::move(term));
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return TfidfModel(std::move(terms), std::move(idf), max_features, corpus.size());
}

SparseVector transform_tfidf(const TfidfModel& model, const TokenStream& stream) {
  std::map<std::size_t, double> counts;
  for (const auto& token : stream.tokens) {
    if (auto index = model.index_of(token)) counts[*index] += 1.0;
  }
  SparseVector v = SparseVector::zeros(model.size());
  double sum_sq = 0.0;
  for (const auto& [index, tf] : counts) {
    const double w = tf * model.idf()[index];
    v.indices.push_back(index);
    v.values.push_back(w);
    sum_sq += w * w;
  }
  if (sum_sq > 0.0) {
    const double norm = std::sqrt(sum_sq);
    for (double& x : v.values) x /= norm;
  }
  return v;
}

void write_tfidf_model(const std::filesystem::path& path, const TfidfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << model.to_json().dump(2) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

TfidfModel read_tfidf_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return TfidfModel::from_json(doc);
}

}  // namespace tweetfuse
