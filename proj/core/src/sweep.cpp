#include "tweetfuse/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "tweetfuse/error.hpp"
#include "tweetfuse/eval.hpp"
#include "tweetfuse/json_format.hpp"

namespace tweetfuse {
namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void run_row(SweepRow& row, const PreparedSplit& train_split, const PreparedSplit& val_split, const TfidfModel* tfidf) {
  try {
    const auto layout = make_layout(row.features, train_split.embedding_dim, tfidf);
    const auto train_set = build_examples(train_split, layout, tfidf);
    const auto model = train(train_set, row.loss, row.seed, row.hyper, layout);

    LabelMap predicted;
    LabelMap gold;
    for (const auto& tweet : val_split.rows) {
      if (!tweet.label) throw Error("validation tweet " + tweet.id + " has no label");
      predicted[tweet.id] = predict(model, feature_vector(tweet, layout, tfidf)).label;
      gold[tweet.id] = *tweet.label;
    }
    const auto report = evaluate(predicted, gold);
    row.precision = report.precision;
    row.recall = report.recall;
    row.f1 = report.f1;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

}  // namespace

std::vector<SweepRow> sweep(const PreparedSplit& train_split, const PreparedSplit& val_split,
                            std::span<const SweepEntry> entries, std::span<const std::uint64_t> seeds, unsigned threads) {
  if (seeds.empty()) throw ContractViolation("sweep: at least one seed is required");

  // One TF-IDF fit per cap, shared read-only by all rows that use it.
  std::map<std::size_t, std::shared_ptr<const TfidfModel>> tfidf_by_cap;
  std::map<std::size_t, std::string> tfidf_errors;
  for (const auto& entry : entries) {
    if (!entry.features.use_tfidf) continue;
    const auto cap = entry.features.tfidf_max_features;
    if (tfidf_by_cap.contains(cap) || tfidf_errors.contains(cap)) continue;
    try {
      tfidf_by_cap[cap] = std::make_shared<const TfidfModel>(fit_tfidf(train_split, cap));
    } catch (const std::exception& e) {
      tfidf_errors[cap] = e.what();
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(entries.size() * seeds.size());
  for (const auto& entry : entries) {
    for (const auto seed : seeds) {
      SweepRow row;
      row.name = entry.name;
      row.features = entry.features;
      row.hyper = entry.hyper;
      row.loss = entry.loss;
      row.seed = seed;
      rows.push_back(std::move(row));
    }
  }

  const auto work = [&](SweepRow& row) {
    const TfidfModel* tfidf = nullptr;
    if (row.features.use_tfidf) {
      const auto cap = row.features.tfidf_max_features;
      if (auto err = tfidf_errors.find(cap); err != tfidf_errors.end()) {
        row.error = err->second;
        return;
      }
      tfidf = tfidf_by_cap.at(cap).get();
    }
    run_row(row, train_split, val_split, tfidf);
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
  if (workers == 1) {
    for (auto& row : rows) work(row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) work(rows[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.ok != b.ok) return a.ok;
    return a.ok && a.f1 > b.f1;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "rank,name,loss,use_embedding,use_tfidf,use_prob,tfidf_max_features,epochs,eta0,lambda,seed,status,"
         "precision,recall,f1,error\n";
  std::size_t rank = 0;
  for (const auto& r : rows) {
    out << ++rank << ',' << csv_field(r.name) << ',' << to_string(r.loss) << ',' << r.features.use_embedding << ','
        << r.features.use_tfidf << ',' << r.features.use_prob << ',' << r.features.tfidf_max_features << ','
        << r.hyper.epochs << ',' << format_double(r.hyper.eta0) << ',' << format_double(r.hyper.lambda) << ','
        << r.seed << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      out << format_metric(r.precision) << ',' << format_metric(r.recall) << ',' << format_metric(r.f1);
    } else {
      out << ",,";
    }
    out << ',' << csv_field(r.error) << '\n';
  }
}

}  // namespace tweetfuse
