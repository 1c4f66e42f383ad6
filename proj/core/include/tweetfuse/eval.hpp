#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tweetfuse/normalize.hpp"

namespace tweetfuse {

using LabelMap = std::map<std::string, Label>;

/// Counts with INFORMATIVE as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct EvalReport {
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::set<std::string> fp_ids;
  std::set<std::string> fn_ids;
  /// Every evaluated id, sorted. Used to check that two reports are
  /// comparable.
  std::vector<std::string> ids;
};

/// Precision, recall and F1 fall back to 0 when their denominator is 0.
/// Throws EvaluationError listing missing and extra ids when the key sets
/// differ, or when either map is empty.
EvalReport evaluate(const LabelMap& predictions, const LabelMap& gold);

/// Share of the base model's errors that the reference model also makes,
/// as in "percentage of misclassifications shared with the SVM". A field
/// is absent when the base model has no errors of that kind.
struct IntersectionReport {
  std::string base_model;
  std::string reference_model;
  std::size_t base_fp = 0;
  std::size_t base_fn = 0;
  std::size_t shared_fp = 0;
  std::size_t shared_fn = 0;
  std::optional<double> shared_fp_pct;
  std::optional<double> shared_fn_pct;
};

/// Throws EvaluationError when the reports cover different ids.
IntersectionReport intersect_errors(const EvalReport& base, const EvalReport& reference,
                                    std::string base_name = "base", std::string reference_name = "reference");

/// Per-class histograms of power_transform(prob_numeric(text)) over 20
/// equal-width bins on [0, 1]; the last bin is closed. A class with no
/// tweets has an empty `counts`.
struct DistributionReport {
  static constexpr std::size_t kBins = 20;

  struct Histogram {
    std::vector<std::size_t> counts;
    std::size_t total = 0;
  };

  Histogram informative;
  Histogram uninformative;

  static double bin_low(std::size_t bin) { return static_cast<double>(bin) / kBins; }
  static double bin_high(std::size_t bin) { return static_cast<double>(bin + 1) / kBins; }
  static std::size_t bin_of(double value);
};

/// Throws EvaluationError on an unlabeled tweet.
DistributionReport feature_distribution_report(std::span<const Tweet> tweets);

nlohmann::json to_json(const ConfusionMatrix& m);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const IntersectionReport& report);
nlohmann::json to_json(const DistributionReport& report);

/// bin_low,bin_high,class,count rows; empty classes contribute no rows.
void write_histogram_csv(std::ostream& out, const DistributionReport& report);

/// "Model / False Negative / False Positive" table, one row per report,
/// undefined percentages shown as "n/a".
void write_intersection_table(std::ostream& out, std::span<const IntersectionReport> reports);

}  // namespace tweetfuse
