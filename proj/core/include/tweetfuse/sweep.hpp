#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tweetfuse/linear_model.hpp"
#include "tweetfuse/pipeline.hpp"

namespace tweetfuse {

struct SweepEntry {
  std::string name;
  FeatureConfig features;
  Hyperparams hyper;
  LossKind loss = LossKind::Logistic;
};

struct SweepRow {
  std::string name;
  FeatureConfig features;
  Hyperparams hyper;
  LossKind loss = LossKind::Logistic;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline const std::vector<std::uint64_t>& default_seeds() {
  static const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  return seeds;
}

/// Trains every (entry, seed) pair on `train` and scores F1 on `val`.
/// TF-IDF is fitted once per distinct max-features value. A row whose
/// training throws is kept with ok == false and its message. Rows come
/// back sorted by F1 descending (failed rows last, ties in input order),
/// so the first row is the best run.
///
/// Rows are independent; `threads > 1` trains them concurrently without
/// changing the result.
std::vector<SweepRow> sweep(const PreparedSplit& train, const PreparedSplit& val, std::span<const SweepEntry> entries,
                            std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// rank,name,loss,use_embedding,use_tfidf,use_prob,tfidf_max_features,
/// epochs,eta0,lambda,seed,status,precision,recall,f1,error
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace tweetfuse
