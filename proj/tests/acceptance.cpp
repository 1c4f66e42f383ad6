// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero when any criterion fails. Tolerances and time limits are fixed
// here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tweetfuse/dataset.hpp"
#include "tweetfuse/eval.hpp"
#include "tweetfuse/linear_model.hpp"
#include "tweetfuse/normalize.hpp"
#include "tweetfuse/numeric_feature.hpp"
#include "tweetfuse/pipeline.hpp"
#include "tweetfuse/sweep.hpp"
#include "tweetfuse/tfidf.hpp"

namespace tf = tweetfuse;
namespace oracle = tweetfuse::testing;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_seconds;
  std::function<Outcome()> check;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string ascii_upper(std::string s) {
  for (char& c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

// --- normalization ----------------------------------------------------------------

Outcome normalization_suite() {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::string first_failure;
  const auto expect = [&](bool ok, const std::string& what) {
    ++total;
    if (ok) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = what;
    }
  };
  using Tokens = std::vector<std::string>;

  expect(tf::segment_hashtag("#HashTag") == Tokens{"#Hash", "Tag"}, "#HashTag");
  expect(tf::segment_hashtag("#covid") == Tokens{"#covid"}, "#covid");
  expect(tf::segment_hashtag("#NHSHeroes") == Tokens{"#NHS", "Heroes"}, "#NHSHeroes");

  for (const std::string v : {"covid-19", "covid19", "covid 19", "covid", "corona virus", "coronavirus", "#covid_19",
                              "#covid-19", "#covid19", "#covid", "#corona virus", "#coronavirus"}) {
    for (const auto& form : {v, ascii_upper(v)}) {
      expect(tf::standardize_corona("a " + form + " b", tf::CoronaMode::Standard) == "a coronavirus b", form);
      expect(tf::standardize_corona("a " + form + " b", tf::CoronaMode::Disease) == "a coronavirus disease b", form);
      expect(tf::standardize_corona(form, tf::CoronaMode::Off) == form, form + " (OFF)");
    }
  }
  expect(tf::standardize_corona("New COVID-19 cases", tf::CoronaMode::Standard) == "New coronavirus cases",
         "New COVID-19 cases");
  expect(tf::standardize_corona("Covid19 and corona virus updates", tf::CoronaMode::Disease) ==
             "coronavirus disease and coronavirus disease updates",
         "DISEASE example");

  expect(tf::strip_emoji("stay safe \U0001F637") == "stay safe ", "face mask");
  expect(tf::strip_emoji("plain text") == "plain text", "plain text");
  expect(tf::strip_emoji("1️⃣ case") == " case", "keycap");
  // Digits and letters survive any interleaving with emoji.
  std::mt19937_64 rng(99);
  const std::string keep = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  const std::vector<char32_t> emoji{0x1F637, 0x1F600, 0x1F44D, 0x2764, 0x1F680, 0x1F9A0, 0x1F1EC};
  std::uniform_int_distribution<std::size_t> pick_keep(0, keep.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_emoji(0, emoji.size() - 1);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    std::string expected;
    for (int i = 0; i < 24; ++i) {
      if (coin(rng)) {
        text += oracle::oracle_encode(emoji[pick_emoji(rng)]);
      } else {
        text += keep[pick_keep(rng)];
        expected += text.back();
      }
    }
    expect(tf::strip_emoji(text) == expected, "digits/letters case " + std::to_string(trial));
  }

  const tf::Tweet t1{"t1", "#StayHome COVID-19 update", std::nullopt};
  tf::NormalizationConfig c1;
  expect(tf::normalize(t1, c1).tokens == Tokens{"#Stay", "Home", "coronavirus", "update"}, "normalize t1");
  tf::NormalizationConfig c3;
  c3.hashtag_segmentation = false;
  c3.lowercase = true;
  expect(tf::normalize({"t3", "covid19 \U0001F637", std::nullopt}, c3).tokens == Tokens{"coronavirus"},
         "normalize t3");
  expect(tf::tfidf_preprocess({{"the", "cases", "are", "rising", "!"}, "x"}).tokens == Tokens{"case", "rise"},
         "tfidf_preprocess");

  std::string detail = std::to_string(passed) + "/" + std::to_string(total) + " cases";
  if (!first_failure.empty()) detail += "; first failure: " + first_failure;
  return verdict(passed == total, detail);
}

// --- TF-IDF ----------------------------------------------------------------------

Outcome tfidf_oracle() {
  std::mt19937_64 rng(2020);
  std::uniform_int_distribution<int> n_docs(1, 10);
  std::uniform_int_distribution<int> doc_len(0, 12);
  std::uniform_int_distribution<int> n_terms(1, 15);
  std::uniform_int_distribution<int> cap(1, 15);
  const int corpora = 100;
  double worst = 0.0;
  for (int c = 0; c < corpora; ++c) {
    const int terms = n_terms(rng);
    std::uniform_int_distribution<int> term(0, terms - 1);
    std::vector<std::vector<std::string>> docs(static_cast<std::size_t>(n_docs(rng)));
    for (auto& d : docs) {
      for (int k = doc_len(rng); k > 0; --k) d.push_back("w" + std::to_string(term(rng)));
    }
    docs[0].push_back("w0");
    const auto k = static_cast<std::size_t>(cap(rng));
    const auto brute = oracle::brute_force_tfidf(docs, k);
    std::vector<tf::TokenStream> streams;
    for (const auto& d : docs) streams.push_back({d, "d"});
    const auto model = tf::fit_tfidf(streams, k);
    if (model.terms() != brute.vocabulary) return verdict(false, "vocabulary differs on corpus " + std::to_string(c));
    for (std::size_t r = 0; r < docs.size(); ++r) {
      const auto dense = tf::transform_tfidf(model, streams[r]).to_dense();
      for (std::size_t j = 0; j < dense.size(); ++j) worst = std::max(worst, std::abs(dense[j] - brute.rows[r][j]));
    }
  }
  return verdict(worst <= 1e-9, std::to_string(corpora) + " corpora, max |diff| " + fmt("%.2e", worst) + " <= 1e-9");
}

// --- prob_numeric ----------------------------------------------------------------

Outcome prob_numeric_exact() {
  std::mt19937_64 rng(7);
  // Pools of code points; emoji are tracked so the oracle can drop them.
  const auto range = [](char32_t lo, char32_t hi) {
    std::vector<char32_t> v;
    for (char32_t c = lo; c <= hi; ++c) v.push_back(c);
    return v;
  };
  std::vector<char32_t> digits;
  for (char32_t zero : oracle::kDigitZeros) {
    for (char32_t k = 0; k < 10; ++k) digits.push_back(zero + k);
  }
  const std::vector<std::vector<char32_t>> others{
      range(0x20, 0x2F),    range(0x3A, 0x7E),    range(0xC0, 0xFF),   {0xB2, 0xB3, 0xB9, 0xBC, 0xBD},
      range(0x2160, 0x2188), range(0x2460, 0x2473), range(0x627, 0x64A), range(0x905, 0x939),
      range(0x4E00, 0x4E80), {0x3000, 0x2003, 0x00A0}};
  const std::vector<char32_t> emoji = [&] {
    auto e = range(0x1F600, 0x1F64F);
    for (char32_t c : range(0x1F680, 0x1F6C5)) e.push_back(c);
    for (char32_t c : range(0x1F300, 0x1F320)) e.push_back(c);
    return e;
  }();
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<int> length(0, 60);
  const auto pick = [&](const std::vector<char32_t>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };

  const int strings = 1000;
  for (int s = 0; s < strings; ++s) {
    std::string text;
    std::string emoji_free;
    for (int i = length(rng); i > 0; --i) {
      const int k = kind(rng);
      char32_t cp;
      if (k < 3) {
        cp = pick(digits);
      } else if (k < 5) {
        cp = pick(emoji);
        text += oracle::oracle_encode(cp);
        continue;
      } else {
        cp = pick(others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng)]);
      }
      text += oracle::oracle_encode(cp);
      emoji_free += oracle::oracle_encode(cp);
    }
    const double expected = oracle::oracle_digit_fraction(emoji_free);
    const double got = tf::prob_numeric(text).value;
    if (got != expected) {
      return verdict(false, "string " + std::to_string(s) + ": got " + fmt("%.17g", got) + ", oracle " +
                                fmt("%.17g", expected));
    }
  }
  return verdict(true, std::to_string(strings) + " random strings, exact equality");
}

// --- gradients ------------------------------------------------------------------

Outcome gradient_checks() {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(1, 8);
  const int per_loss = 100;
  double worst = 0.0;
  for (const auto loss : {tf::LossKind::Hinge, tf::LossKind::Logistic}) {
    for (int done = 0; done < per_loss;) {
      const auto d = static_cast<std::size_t>(dim(rng));
      std::vector<double> w(d), x(d);
      for (std::size_t i = 0; i < d; ++i) w[i] = g(rng), x[i] = g(rng);
      const double b = g(rng);
      const int y = (rng() & 1) ? 1 : -1;
      const double lambda = 0.05 * std::abs(g(rng));
      double margin = b;
      for (std::size_t i = 0; i < d; ++i) margin += w[i] * x[i];
      if (loss == tf::LossKind::Hinge && std::abs(1.0 - y * margin) < 1e-3) continue;  // kink

      const auto analytic = tf::example_gradient(loss, w, b, x, y, lambda);
      const auto numeric = oracle::central_difference(
          [&](const std::vector<double>& ww, double bb) { return tf::example_objective(loss, ww, bb, x, y, lambda); },
          w, b);
      for (std::size_t i = 0; i <= d; ++i) {
        const double a = i < d ? analytic.w[i] : analytic.b;
        const double rel = std::abs(a - numeric[i]) / std::max(1.0, std::abs(a) + std::abs(numeric[i]));
        worst = std::max(worst, rel);
      }
      ++done;
    }
  }
  return verdict(worst <= 1e-5, std::to_string(2 * per_loss) + " instances (hinge+logistic), max rel err " +
                                    fmt("%.2e", worst) + " <= 1e-5");
}

// --- determinism -------------------------------------------------------------------

struct Splits {
  tf::PreparedSplit train;
  tf::PreparedSplit val;
};

Splits synthetic_splits(std::uint64_t corpus_seed, std::size_t n, std::size_t val_count) {
  const auto corpus = oracle::make_ensemble_corpus(n, corpus_seed);
  const auto [train, val] = oracle::split_tail(corpus.dataset, val_count);
  tf::EmbedderSpec spec;
  spec.kind = tf::EmbedderKind::File;
  spec.path = "synthetic";
  return {tf::prepare_split(train, tf::NormalizationConfig{}, &spec, &corpus.embeddings),
          tf::prepare_split(val, tf::NormalizationConfig{}, &spec, &corpus.embeddings)};
}

tf::SweepEntry entry(const std::string& name) {
  const auto features = *tf::ensemble_preset(name);
  return {name, features, tf::Hyperparams{}, tf::default_loss(features)};
}

Outcome determinism() {
  const auto s = synthetic_splits(42, 1000, 200);
  const auto model_bytes = [&] {
    const auto tfidf = tf::fit_tfidf(s.train, 6000);
    const auto layout = tf::make_layout(*tf::ensemble_preset("prob+tfidf"), s.train.embedding_dim, &tfidf);
    const auto model =
        tf::train(tf::build_examples(s.train, layout, &tfidf), tf::LossKind::Logistic, 7, tf::Hyperparams{}, layout);
    std::ostringstream out;
    tf::write_model(out, model, tfidf.to_json());
    return out.str();
  };
  const std::vector<tf::SweepEntry> entries{entry("prob"), entry("tfidf"), entry("prob+tfidf"), entry("svm")};
  const auto sweep_csv = [&](unsigned threads) {
    std::ostringstream out;
    tf::write_sweep_csv(out, tf::sweep(s.train, s.val, entries, tf::default_seeds(), threads));
    return out.str();
  };
  const bool models_same = model_bytes() == model_bytes();
  const auto csv = sweep_csv(1);
  const bool sweep_same = csv == sweep_csv(1) && csv == sweep_csv(4);
  return verdict(models_same && sweep_same, std::string("model files ") + (models_same ? "identical" : "DIFFER") +
                                                ", sweep CSV (20 rows, 1 and 4 threads) " +
                                                (sweep_same ? "identical" : "DIFFER"));
}

// --- synthetic ensemble ordering -----------------------------------------------------

Outcome ensemble_ordering() {
  const std::vector<std::string> names{"embedding", "prob", "tfidf", "prob+tfidf"};
  std::vector<double> mean(names.size(), 0.0);
  const int seeds = 10;
  for (int s = 1; s <= seeds; ++s) {
    const auto splits = synthetic_splits(1000 + static_cast<std::uint64_t>(s), 2000, 400);
    std::vector<tf::SweepEntry> entries;
    for (const auto& n : names) entries.push_back(entry(n));
    const std::vector<std::uint64_t> seed{static_cast<std::uint64_t>(s)};
    for (const auto& row : tf::sweep(splits.train, splits.val, entries, seed)) {
      if (!row.ok) return verdict(false, row.name + " failed: " + row.error);
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (row.name == names[i]) mean[i] += row.f1 / seeds;
      }
    }
  }
  const double base = mean[0], prob = mean[1], tfidf = mean[2], both = mean[3];
  const bool ok = both >= tfidf + 0.005 && prob >= base + 0.005 && both >= prob;
  return verdict(ok, "mean F1 over 10 seeds: prob+tfidf " + fmt("%.4f", both) + ", prob " + fmt("%.4f", prob) +
                         ", tfidf " + fmt("%.4f", tfidf) + ", baseline " + fmt("%.4f", base) +
                         " (need prob+tfidf >= tfidf+0.005, prob >= baseline+0.005, prob+tfidf >= prob)");
}

// --- evaluation arithmetic -------------------------------------------------------------

Outcome evaluation_arithmetic() {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  const int pairs = 100;
  for (int trial = 0; trial < pairs; ++trial) {
    const int n = size(rng);
    std::vector<std::string> ids;
    std::vector<bool> gold, pred_a, pred_b;
    const double pa = rate(rng), pb = rate(rng), pg = rate(rng);
    tf::LabelMap gold_map, a_map, b_map;
    for (int i = 0; i < n; ++i) {
      ids.push_back("id" + std::to_string(i));
      gold.push_back(rate(rng) < pg);
      pred_a.push_back(rate(rng) < pa);
      pred_b.push_back(rate(rng) < pb);
      const auto lab = [](bool pos) { return pos ? tf::Label::Informative : tf::Label::Uninformative; };
      gold_map[ids.back()] = lab(gold.back());
      a_map[ids.back()] = lab(pred_a.back());
      b_map[ids.back()] = lab(pred_b.back());
    }
    const auto ba = oracle::brute_force_counts(ids, pred_a, gold);
    const auto bb = oracle::brute_force_counts(ids, pred_b, gold);
    const auto ra = tf::evaluate(a_map, gold_map);
    const auto rb = tf::evaluate(b_map, gold_map);
    const bool counts_ok = ra.confusion == tf::ConfusionMatrix{ba.tp, ba.fp, ba.fn, ba.tn} &&
                           ra.fp_ids == ba.fp_ids && ra.fn_ids == ba.fn_ids && ra.f1 == oracle::brute_force_f1(ba);
    const auto inter = tf::intersect_errors(ra, rb, "a", "b");
    const auto shared_fp = oracle::brute_force_shared(ba.fp_ids, bb.fp_ids);
    const auto shared_fn = oracle::brute_force_shared(ba.fn_ids, bb.fn_ids);
    const auto pct = [](std::size_t num, std::size_t den) -> std::optional<double> {
      if (den == 0) return std::nullopt;
      return 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    const bool inter_ok = inter.shared_fp == shared_fp && inter.shared_fn == shared_fn &&
                          inter.shared_fp_pct == pct(shared_fp, ba.fp) && inter.shared_fn_pct == pct(shared_fn, ba.fn);
    if (!counts_ok || !inter_ok) {
      return verdict(false, "pair " + std::to_string(trial) + (counts_ok ? ": intersection" : ": counts/F1") +
                                " differ from brute force");
    }
  }

  // Report shape: per model, the share of its FN and FP also made by the reference.
  const std::vector<std::string> ids{"a", "b", "c", "d", "e"};
  tf::LabelMap gold{{"a", tf::Label::Informative}, {"b", tf::Label::Informative}, {"c", tf::Label::Uninformative},
                    {"d", tf::Label::Uninformative}, {"e", tf::Label::Informative}};
  tf::LabelMap svm = gold, fusion = gold;
  svm["a"] = tf::Label::Uninformative;
  svm["c"] = tf::Label::Informative;
  fusion["a"] = tf::Label::Uninformative;
  fusion["b"] = tf::Label::Uninformative;
  fusion["c"] = tf::Label::Informative;
  const auto rs = tf::evaluate(svm, gold);
  const auto rf = tf::evaluate(fusion, gold);
  const std::vector<tf::IntersectionReport> table{tf::intersect_errors(rf, rs, "fusion", "svm")};
  std::ostringstream text;
  tf::write_intersection_table(text, table);
  const auto json = tf::to_json(table[0]);
  const bool shape_ok = text.str().find("False Negative") != std::string::npos &&
                        text.str().find("False Positive") != std::string::npos &&
                        text.str().find("50.00%") != std::string::npos &&
                        text.str().find("100.00%") != std::string::npos && json.contains("shared_fp_pct") &&
                        json.contains("shared_fn_pct");
  return verdict(shape_ok, std::to_string(pairs) + " random pairs match brute force exactly; shared FP%/FN% table " +
                               (shape_ok ? "emitted" : "MALFORMED"));
}

// --- optional real-data SVM ------------------------------------------------------------

Outcome real_data_svm() {
  const char* dir = std::getenv("TWEETFUSE_WNUT_DIR");
  if (!dir || !*dir) return {Status::Skip, "set TWEETFUSE_WNUT_DIR to a folder with train.tsv and valid.tsv"};
  const std::filesystem::path root(dir);
  const auto train = tf::read_dataset(root / "train.tsv");
  const auto val = tf::read_dataset(root / "valid.tsv");
  const auto train_split = tf::prepare_split(train, tf::NormalizationConfig{}, nullptr);
  const auto val_split = tf::prepare_split(val, tf::NormalizationConfig{}, nullptr);
  std::vector<tf::SweepEntry> entries;
  for (const std::size_t cap : {6000, 9000}) {
    const auto features = *tf::ensemble_preset("svm", cap);
    entries.push_back({"svm", features, tf::Hyperparams{}, tf::LossKind::Hinge});
  }
  const auto rows = tf::sweep(train_split, val_split, entries, tf::default_seeds());
  if (rows.empty() || !rows.front().ok) return verdict(false, "every SVM run failed");
  const double best = rows.front().f1;
  return verdict(best >= 0.75, "best validation F1 " + fmt("%.4f", best) + " >= 0.75");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"normalization suite", 1.0, normalization_suite},
      {"tf-idf oracle equivalence", 5.0, tfidf_oracle},
      {"prob_numeric exactness", 1.0, prob_numeric_exact},
      {"gradient checks", 5.0, gradient_checks},
      {"determinism", 30.0, determinism},
      {"synthetic ensemble ordering", 120.0, ensemble_ordering},
      {"evaluation/intersection arithmetic", 5.0, evaluation_arithmetic},
      {"svm baseline on real data (optional)", 300.0, real_data_svm},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Status::Pass && secs > c.limit_seconds) o.status = Status::Fail;
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
    if (o.status == Status::Fail) ++failures;
    std::printf("%s  %-38s %s [%.2f s, limit %.0f s]\n", tag, c.name.c_str(), o.detail.c_str(), secs, c.limit_seconds);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
