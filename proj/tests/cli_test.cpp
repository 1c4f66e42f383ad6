#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/synthetic.hpp"
#include "tweetfuse/embeddings.hpp"

namespace tweetfuse {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tweetfuse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto corpus = testing::make_ensemble_corpus(400, 5, 8);
    const auto [train, val] = testing::split_tail(corpus.dataset, 100);
    write(train, "train.tsv");
    write(val, "val.tsv");
    write_embeddings(path("emb.jsonl"), corpus.embeddings);
  }

  void TearDown() override { fs::remove_all(dir_); }

  void write(const Dataset& ds, const std::string& name) {
    std::ofstream out(path(name), std::ios::binary);
    write_dataset(out, ds);
  }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "tweetfuse");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST_F(CliTest, PreprocessKeepsRowsAndSegmentsHashtags) {
  write_text("in.tsv", "1\t#HashTag news\tINFORMATIVE\n2\tCOVID-19 update \U0001F637\tUNINFORMATIVE\n3\tplain\t\n");
  const auto r = run({"preprocess", "--in", path("in.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "1\t#Hash Tag news\tINFORMATIVE\n2\tcoronavirus update\tUNINFORMATIVE\n3\tplain\t\n");
}

TEST_F(CliTest, PreprocessReportsBadLine) {
  write_text("bad.tsv", "Id\tText\tLabel\n1\tfine\tINFORMATIVE\n2\t \tINFORMATIVE\n");
  const auto r = run({"preprocess", "--in", path("bad.tsv")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrainPredictEvaluate) {
  const auto t = run({"train", "--train", path("train.tsv"), "--embeddings", path("emb.jsonl"), "--ensemble",
                      "prob+tfidf", "--seed", "4", "--out", path("model.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  const auto model = nlohmann::json::parse(slurp(path("model.json")));
  EXPECT_EQ(model["loss_kind"], "LOGISTIC");
  EXPECT_EQ(model["seed"], 4);

  const auto p = run({"predict", "--model", path("model.json"), "--in", path("val.tsv"), "--embeddings",
                      path("emb.jsonl"), "--out", path("pred.tsv")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(count_lines(slurp(path("pred.tsv"))), 101u);

  const auto e = run({"evaluate", "--pred", path("pred.tsv"), "--gold", path("val.tsv"), "--out", path("eval.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto report = nlohmann::json::parse(slurp(path("eval.json")));
  EXPECT_EQ(report["count"], 100);
  EXPECT_GT(report["f1"].get<double>(), 0.5);
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  for (const char* name : {"a.json", "b.json"}) {
    ASSERT_EQ(run({"train", "--train", path("train.tsv"), "--ensemble", "prob+tfidf", "--out", path(name)}).code, 0);
  }
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  const auto p1 = run({"predict", "--model", path("a.json"), "--in", path("val.tsv")});
  const auto p2 = run({"predict", "--model", path("b.json"), "--in", path("val.tsv")});
  ASSERT_EQ(p1.code, 0) << p1.err;
  EXPECT_EQ(p1.out, p2.out);
}

TEST_F(CliTest, SweepFiveSeedsTwoCapsGivesTenRows) {
  const auto r = run({"sweep", "--train", path("train.tsv"), "--val", path("val.tsv"), "--ensembles", "tfidf",
                      "--max-features", "6000,9000", "--out", path("sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("sweep.csv"));
  EXPECT_EQ(count_lines(csv), 11u);
  EXPECT_EQ(csv.rfind("rank,name,loss", 0), 0u);
  const auto again = run({"sweep", "--train", path("train.tsv"), "--val", path("val.tsv"), "--ensembles", "tfidf",
                          "--max-features", "6000,9000", "--threads", "3"});
  EXPECT_EQ(again.out, csv);
}

TEST_F(CliTest, AnalyzeEmitsIntersectionTable) {
  ASSERT_EQ(run({"train", "--train", path("train.tsv"), "--ensemble", "svm", "--out", path("svm.json")}).code, 0);
  ASSERT_EQ(run({"train", "--train", path("train.tsv"), "--ensemble", "embedding", "--out", path("emb.json")}).code, 0);
  ASSERT_EQ(run({"predict", "--model", path("svm.json"), "--in", path("val.tsv"), "--out", path("svm.tsv")}).code, 0);
  ASSERT_EQ(run({"predict", "--model", path("emb.json"), "--in", path("val.tsv"), "--out", path("emb.tsv")}).code, 0);
  const auto r = run({"analyze", "--gold", path("val.tsv"), "--pred", "svm=" + path("svm.tsv"), "--pred",
                      "baseline=" + path("emb.tsv"), "--out", path("analysis.json"), "--histogram-csv",
                      path("hist.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("False Negative"), std::string::npos);
  EXPECT_NE(r.out.find("baseline"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(path("analysis.json")));
  EXPECT_EQ(doc["intersections"].size(), 2u);
  EXPECT_TRUE(doc["intersections"][0].contains("shared_fp_pct"));
  EXPECT_EQ(doc["distribution"]["INFORMATIVE"]["counts"].size(), 20u);
  EXPECT_EQ(slurp(path("hist.csv")).rfind("bin_low,bin_high,class,count\n", 0), 0u);
}

TEST_F(CliTest, HashEmbedOutputLoads) {
  const auto r = run({"hash-embed", "--in", path("val.tsv"), "--dim", "16", "--seed", "3", "--out", path("h.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto map = load_embeddings(path("h.jsonl"));
  EXPECT_EQ(map.size(), 100u);
  EXPECT_EQ(embedding_dim(map), 16u);
  EXPECT_EQ(map.begin()->second.source_tag, "hash-fnv1a:d=16:seed=3");
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  write_text("run.ini", "[data]\ntrain = " + path("train.tsv") + "\nval = " + path("val.tsv") +
                            "\n\n[features]\nensemble = svm\n\n[train]\nepochs = 3\nseed = 9\n");
  ASSERT_EQ(run({"train", "--config", path("run.ini"), "--out", path("m1.json")}).code, 0);
  const auto m1 = nlohmann::json::parse(slurp(path("m1.json")));
  EXPECT_EQ(m1["seed"], 9);
  EXPECT_EQ(m1["train_meta"]["epochs"], 3);
  EXPECT_EQ(m1["loss_kind"], "HINGE");

  ASSERT_EQ(run({"train", "--config", path("run.ini"), "--seed", "2", "--epochs", "5", "--out", path("m2.json")}).code, 0);
  const auto m2 = nlohmann::json::parse(slurp(path("m2.json")));
  EXPECT_EQ(m2["seed"], 2);
  EXPECT_EQ(m2["train_meta"]["epochs"], 5);
}

TEST_F(CliTest, ErrorsGiveNonZeroExit) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"bogus"}).code, 0);
  EXPECT_NE(run({"train", "--train", path("missing.tsv")}).code, 0);
  EXPECT_NE(run({"train", "--train", path("train.tsv"), "--ensemble", "bert"}).code, 0);
  EXPECT_NE(run({"analyze", "--gold", path("val.tsv"), "--pred", "only=" + path("val.tsv")}).code, 0);

  write_text("typo.ini", "[train]\nepoch = 3\n");
  const auto r = run({"train", "--config", path("typo.ini"), "--train", path("train.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("train.epoch"), std::string::npos) << r.err;

  // A file embedder needs its embeddings at predict time too.
  ASSERT_EQ(run({"train", "--train", path("train.tsv"), "--embeddings", path("emb.jsonl"), "--ensemble", "prob",
                 "--out", path("file.json")})
                .code,
            0);
  EXPECT_EQ(run({"predict", "--model", path("file.json"), "--in", path("val.tsv")}).code, 1);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

}  // namespace
}  // namespace tweetfuse
