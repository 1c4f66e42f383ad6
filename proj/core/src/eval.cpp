#include "tweetfuse/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <ostream>

#include "tweetfuse/error.hpp"
#include "tweetfuse/numeric_feature.hpp"

namespace tweetfuse {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 20) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n, ++ia, ++ib;
    }
  }
  return n;
}

nlohmann::json optional_pct(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json histogram_json(const DistributionReport::Histogram& h) {
  return {{"total", h.total}, {"counts", h.counts}};
}

std::string format_pct(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *v);
  return buf;
}

}  // namespace

EvalReport evaluate(const LabelMap& predictions, const LabelMap& gold) {
  if (predictions.empty() || gold.empty()) throw EvaluationError("evaluate: predictions and gold must be non-empty");

  std::vector<std::string> missing;
  std::vector<std::string> extra;
  for (const auto& [id, label] : gold) {
    if (!predictions.contains(id)) missing.push_back(id);
  }
  for (const auto& [id, label] : predictions) {
    if (!gold.contains(id)) extra.push_back(id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "evaluate: prediction ids differ from gold ids";
    if (!missing.empty()) msg += "; missing predictions for: " + join_ids(missing);
    if (!extra.empty()) msg += "; predictions without gold: " + join_ids(extra);
    throw EvaluationError(msg);
  }

  EvalReport r;
  r.ids.reserve(gold.size());
  for (const auto& [id, truth] : gold) {
    const Label pred = predictions.at(id);
    r.ids.push_back(id);
    const bool pred_pos = pred == Label::Informative;
    const bool true_pos = truth == Label::Informative;
    if (pred_pos && true_pos) {
      ++r.confusion.tp;
    } else if (pred_pos) {
      ++r.confusion.fp;
      r.fp_ids.insert(id);
    } else if (true_pos) {
      ++r.confusion.fn;
      r.fn_ids.insert(id);
    } else {
      ++r.confusion.tn;
    }
  }
  r.precision = ratio(r.confusion.tp, r.confusion.tp + r.confusion.fp);
  r.recall = ratio(r.confusion.tp, r.confusion.tp + r.confusion.fn);
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

IntersectionReport intersect_errors(const EvalReport& base, const EvalReport& reference, std::string base_name,
                                    std::string reference_name) {
  if (base.ids != reference.ids) {
    throw EvaluationError("intersect_errors: " + base_name + " and " + reference_name +
                          " were evaluated on different ids");
  }
  IntersectionReport r;
  r.base_model = std::move(base_name);
  r.reference_model = std::move(reference_name);
  r.base_fp = base.fp_ids.size();
  r.base_fn = base.fn_ids.size();
  r.shared_fp = intersection_size(base.fp_ids, reference.fp_ids);
  r.shared_fn = intersection_size(base.fn_ids, reference.fn_ids);
  if (r.base_fp) r.shared_fp_pct = 100.0 * static_cast<double>(r.shared_fp) / static_cast<double>(r.base_fp);
  if (r.base_fn) r.shared_fn_pct = 100.0 * static_cast<double>(r.shared_fn) / static_cast<double>(r.base_fn);
  return r;
}

std::size_t DistributionReport::bin_of(double value) {
  const auto bin = static_cast<std::size_t>(value * kBins);
  return std::min(bin, kBins - 1);
}

DistributionReport feature_distribution_report(std::span<const Tweet> tweets) {
  DistributionReport report;
  for (const auto& tweet : tweets) {
    if (!tweet.label) throw EvaluationError("feature_distribution_report: tweet " + tweet.id + " is unlabeled");
    auto& h = *tweet.label == Label::Informative ? report.informative : report.uninformative;
    if (h.counts.empty()) h.counts.assign(DistributionReport::kBins, 0);
    ++h.counts[DistributionReport::bin_of(power_transform(prob_numeric(tweet.text).value))];
    ++h.total;
  }
  return report;
}

nlohmann::json to_json(const ConfusionMatrix& m) {
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"confusion", to_json(report.confusion)},
          {"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"count", report.ids.size()},
          {"fp_ids", report.fp_ids},
          {"fn_ids", report.fn_ids}};
}

nlohmann::json to_json(const IntersectionReport& report) {
  return {{"base_model", report.base_model},
          {"reference_model", report.reference_model},
          {"base_fp", report.base_fp},
          {"base_fn", report.base_fn},
          {"shared_fp", report.shared_fp},
          {"shared_fn", report.shared_fn},
          {"shared_fp_pct", optional_pct(report.shared_fp_pct)},
          {"shared_fn_pct", optional_pct(report.shared_fn_pct)}};
}

nlohmann::json to_json(const DistributionReport& report) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t b = 0; b < DistributionReport::kBins; ++b) {
    edges.push_back({DistributionReport::bin_low(b), DistributionReport::bin_high(b)});
  }
  return {{"feature", "prob_numeric^(1/5)"},
          {"bins", edges},
          {"INFORMATIVE", histogram_json(report.informative)},
          {"UNINFORMATIVE", histogram_json(report.uninformative)}};
}

void write_histogram_csv(std::ostream& out, const DistributionReport& report) {
  out << "bin_low,bin_high,class,count\n";
  const auto emit = [&](const DistributionReport::Histogram& h, std::string_view name) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      char row[96];
      std::snprintf(row, sizeof row, "%.2f,%.2f,", DistributionReport::bin_low(b), DistributionReport::bin_high(b));
      out << row << name << ',' << h.counts[b] << '\n';
    }
  };
  emit(report.informative, "INFORMATIVE");
  emit(report.uninformative, "UNINFORMATIVE");
}

void write_intersection_table(std::ostream& out, std::span<const IntersectionReport> reports) {
  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.base_model.size());
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %14s  %14s  %s\n", static_cast<int>(width), "Model", "False Negative",
                "False Positive", "Shared with");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-*s  %14s  %14s  %s\n", static_cast<int>(width), r.base_model.c_str(),
                  format_pct(r.shared_fn_pct).c_str(), format_pct(r.shared_fp_pct).c_str(),
                  r.reference_model.c_str());
    out << line;
  }
}

}  // namespace tweetfuse
