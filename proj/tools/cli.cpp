#include "cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include "run_config.hpp"
#include "tweetfuse/dataset.hpp"
#include "tweetfuse/embeddings.hpp"
#include "tweetfuse/error.hpp"
#include "tweetfuse/eval.hpp"
#include "tweetfuse/json_format.hpp"
#include "tweetfuse/linear_model.hpp"
#include "tweetfuse/pipeline.hpp"
#include "tweetfuse/sweep.hpp"
#include "tweetfuse/tfidf.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse::cli {
namespace {

namespace fs = std::filesystem;

// Options shared by every subcommand. Flags given on the command line win
// over the config file.
struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    seed_opt = cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--out", out, "Output path (stdout when omitted)");
  }

  RunConfig load() const { return config.empty() ? RunConfig{} : load_run_config(config); }
  bool has_seed() const { return seed_opt->count() > 0; }
};

/// Writes to `--out` when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("cannot write " + path);
      stream_ = file_.get();
    }
  }

  std::ostream& get() { return *stream_; }

  void close() {
    stream_->flush();
    if (!*stream_) throw Error("write failed" + (path_.empty() ? std::string() : " for " + path_));
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

fs::path pick(const std::string& flag, const fs::path& from_config, const char* what) {
  fs::path p = flag.empty() ? from_config : fs::path(flag);
  if (p.empty()) throw Error(std::string("no ") + what + " given (flag or config)");
  return p;
}

Dataset load_labeled(const fs::path& path) {
  auto ds = read_dataset(path);
  if (!ds.fully_labeled()) throw Error(path.string() + ": every row needs a label");
  return ds;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

/// Loads embeddings only when the spec needs a file.
std::optional<EmbeddingMap> maybe_embeddings(const EmbedderSpec& spec) {
  if (spec.kind != EmbedderKind::File) return std::nullopt;
  spec.validate();
  return load_embeddings(spec.path);
}

PreparedSplit prepare(const Dataset& ds, const RunConfig& cfg, const EmbedderSpec* spec,
                      const std::optional<EmbeddingMap>& embeddings) {
  return prepare_split(ds, cfg.normalization, spec, embeddings ? &*embeddings : nullptr);
}

// id <TAB> label <TAB> score, with a header row.
void write_predictions(std::ostream& out, const std::vector<std::pair<std::string, Prediction>>& rows) {
  out << "Id\tLabel\tScore\n";
  for (const auto& [id, p] : rows) out << id << '\t' << to_string(p.label) << '\t' << format_double(p.score) << '\n';
}

LabelMap read_predictions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open predictions " + path.string());
  LabelMap labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (auto tab = line.find('\t'); tab != std::string::npos; tab = line.find('\t', start)) {
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    fields.push_back(line.substr(start));
    if (line_no == 1 && fields[0] == "Id") continue;
    const auto where = path.string() + ": line " + std::to_string(line_no) + ": ";
    if (fields.size() < 2) throw Error(where + "expected Id<TAB>Label[<TAB>Score]");
    const auto label = parse_label(fields[1]);
    if (!label) throw Error(where + "unknown label \"" + fields[1] + "\"");
    if (!labels.emplace(std::string(unicode::trim(fields[0])), *label).second) {
      throw Error(where + "duplicate id " + fields[0]);
    }
  }
  return labels;
}

LabelMap gold_labels(const Dataset& ds) {
  LabelMap gold;
  for (const auto& t : ds.tweets) gold[t.id] = *t.label;
  return gold;
}

// --- commands -------------------------------------------------------------------

struct PreprocessArgs {
  Common common;
  std::string in;
  bool tfidf = false;
};

void cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
  const auto cfg = a.common.load();
  auto ds = read_dataset(pick(a.in, cfg.train_path, "input dataset"));
  for (auto& tweet : ds.tweets) {
    const auto tokens = a.tfidf ? tfidf_tokens(tweet, cfg.normalization) : normalize(tweet, cfg.normalization);
    tweet.text = join(tokens.tokens);
  }
  Sink sink(a.common.out, out);
  write_dataset(sink.get(), ds);
  sink.close();
}

struct FitTfidfArgs {
  Common common;
  std::string in;
  std::size_t max_features = 0;
  CLI::Option* max_opt = nullptr;
};

void cmd_fit_tfidf(const FitTfidfArgs& a, std::ostream& out) {
  const auto cfg = a.common.load();
  const auto ds = read_dataset(pick(a.in, cfg.train_path, "input dataset"));
  const auto split = prepare_split(ds, cfg.normalization, nullptr);
  const auto model = fit_tfidf(split, a.max_opt->count() ? a.max_features : cfg.tfidf_max_features);
  Sink sink(a.common.out, out);
  sink.get() << model.to_json().dump(2) << '\n';
  sink.close();
}

struct TrainArgs {
  Common common;
  std::string train;
  std::string embeddings;
  std::string ensemble;
  std::string loss;
  std::size_t epochs = 0;
  double eta0 = 0;
  double lambda = 0;
  std::size_t max_features = 0;
  CLI::Option *epochs_opt = nullptr, *eta0_opt = nullptr, *lambda_opt = nullptr, *max_opt = nullptr;
};

void cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& log) {
  auto cfg = a.common.load();
  if (!a.embeddings.empty()) cfg.embeddings_path = a.embeddings;
  if (!a.ensemble.empty()) cfg.ensemble = a.ensemble;
  if (!a.loss.empty()) {
    cfg.loss = parse_loss_kind(a.loss);
    if (!cfg.loss) throw Error("--loss: expected HINGE or LOGISTIC, got \"" + a.loss + "\"");
  }
  if (a.epochs_opt->count()) cfg.hyper.epochs = a.epochs;
  if (a.eta0_opt->count()) cfg.hyper.eta0 = a.eta0;
  if (a.lambda_opt->count()) cfg.hyper.lambda = a.lambda;
  if (a.max_opt->count()) cfg.tfidf_max_features = a.max_features;
  if (a.common.has_seed()) cfg.seed = a.common.seed;

  const auto features = cfg.features();
  const auto ds = load_labeled(pick(a.train, cfg.train_path, "training dataset"));
  const auto spec = cfg.embedder();
  const auto embeddings = features.use_embedding ? maybe_embeddings(spec) : std::nullopt;
  const auto split = prepare(ds, cfg, features.use_embedding ? &spec : nullptr, embeddings);

  std::optional<TfidfModel> tfidf;
  if (features.use_tfidf) tfidf = fit_tfidf(split, features.tfidf_max_features);
  const TfidfModel* tfidf_ptr = tfidf ? &*tfidf : nullptr;
  const auto layout = make_layout(features, split.embedding_dim, tfidf_ptr);
  const auto examples = build_examples(split, layout, tfidf_ptr);
  const auto model = train(examples, cfg.loss.value_or(default_loss(features)), cfg.seed, cfg.hyper, layout);

  const nlohmann::json pipeline = {{"ensemble", cfg.ensemble},
                                   {"normalization", to_json(cfg.normalization)},
                                   {"embedder", features.use_embedding ? to_json(spec) : nlohmann::json(nullptr)},
                                   {"tfidf", tfidf ? tfidf->to_json() : nlohmann::json(nullptr)}};
  Sink sink(a.common.out, out);
  write_model(sink.get(), model, pipeline);
  sink.close();
  log << "trained " << cfg.ensemble << " (" << to_string(model.loss) << ", " << model.weights.size()
      << " weights) on " << ds.tweets.size() << " tweets\n";
}

struct SweepArgs {
  Common common;
  std::string train, val, embeddings, seeds, max_features, ensembles, loss;
  unsigned threads = 1;
  CLI::Option* threads_opt = nullptr;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& log) {
  auto cfg = a.common.load();
  if (!a.embeddings.empty()) cfg.embeddings_path = a.embeddings;
  if (a.common.has_seed()) cfg.sweep_seeds = {a.common.seed};
  if (!a.seeds.empty()) {
    cfg.sweep_seeds.clear();
    for (const auto& s : split_list(a.seeds)) cfg.sweep_seeds.push_back(parse_uint("--seeds", s));
  }
  if (!a.max_features.empty()) {
    cfg.sweep_max_features.clear();
    for (const auto& s : split_list(a.max_features)) {
      const auto v = parse_uint("--max-features", s);
      if (v == 0) throw Error("--max-features: must be at least 1");
      cfg.sweep_max_features.push_back(v);
    }
  }
  if (!a.ensembles.empty()) cfg.sweep_ensembles = split_list(a.ensembles);
  if (!a.loss.empty()) {
    cfg.loss = parse_loss_kind(a.loss);
    if (!cfg.loss) throw Error("--loss: expected HINGE or LOGISTIC, got \"" + a.loss + "\"");
  }
  if (a.threads_opt->count()) cfg.threads = a.threads;
  if (cfg.sweep_seeds.empty()) throw Error("sweep needs at least one seed");
  if (cfg.sweep_ensembles.empty()) throw Error("sweep needs at least one ensemble");
  if (cfg.sweep_max_features.empty()) throw Error("sweep needs at least one max_features value");

  std::vector<SweepEntry> entries;
  bool need_embeddings = false;
  for (const auto& name : cfg.sweep_ensembles) {
    if (!ensemble_preset(name)) throw Error("unknown ensemble \"" + name + "\"");
    for (const auto cap : cfg.sweep_max_features) {
      const auto features = *ensemble_preset(name, cap);
      entries.push_back({name, features, cfg.hyper, cfg.loss.value_or(default_loss(features))});
      need_embeddings |= features.use_embedding;
      if (!features.use_tfidf) break;  // the cap does not matter
    }
  }

  const auto train_ds = load_labeled(pick(a.train, cfg.train_path, "training dataset"));
  const auto val_ds = load_labeled(pick(a.val, cfg.val_path, "validation dataset"));
  const auto spec = cfg.embedder();
  const auto embeddings = need_embeddings ? maybe_embeddings(spec) : std::nullopt;
  const EmbedderSpec* spec_ptr = need_embeddings ? &spec : nullptr;
  const auto train_split = prepare(train_ds, cfg, spec_ptr, embeddings);
  const auto val_split = prepare(val_ds, cfg, spec_ptr, embeddings);

  const auto rows = sweep(train_split, val_split, entries, cfg.sweep_seeds, cfg.threads);
  Sink sink(a.common.out, out);
  write_sweep_csv(sink.get(), rows);
  sink.close();
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.ok ? 0 : 1;
  log << "sweep: " << rows.size() << " runs, " << failed << " failed";
  if (!rows.empty() && rows.front().ok) log << ", best " << rows.front().name << " f1=" << rows.front().f1;
  log << '\n';
}

struct PredictArgs {
  Common common;
  std::string model, in, embeddings;
};

void cmd_predict(const PredictArgs& a, std::ostream& out) {
  const auto cfg = a.common.load();
  const auto file = read_model(a.model);
  const auto& model = file.model;
  const auto& pipeline = file.pipeline;
  if (!pipeline.is_object()) throw Error(a.model + ": model file has no pipeline section");

  RunConfig run = cfg;
  try {
    run.normalization = normalization_from_json(pipeline.at("normalization"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(a.model + ": bad pipeline.normalization: " + e.what());
  }
  const auto& features = model.layout.config;

  std::optional<EmbedderSpec> spec;
  std::optional<EmbeddingMap> embeddings;
  if (features.use_embedding) {
    spec = embedder_from_json(pipeline.at("embedder"));
    if (spec->kind == EmbedderKind::File) {
      spec->path = pick(a.embeddings, cfg.embeddings_path, "embeddings file");
      embeddings = load_embeddings(spec->path);
    }
  }
  std::optional<TfidfModel> tfidf;
  if (features.use_tfidf) tfidf = TfidfModel::from_json(pipeline.at("tfidf"));

  const auto ds = read_dataset(pick(a.in, cfg.test_path, "input dataset"));
  const auto split = prepare(ds, run, spec ? &*spec : nullptr, embeddings);
  if (features.use_embedding && split.embedding_dim != model.layout.embedding_dim) {
    throw Error("embedding dimension " + std::to_string(split.embedding_dim) + " does not match the model's " +
                std::to_string(model.layout.embedding_dim));
  }
  std::vector<std::pair<std::string, Prediction>> rows;
  for (const auto& tweet : split.rows) {
    rows.emplace_back(tweet.id, predict(model, feature_vector(tweet, model.layout, tfidf ? &*tfidf : nullptr)));
  }
  Sink sink(a.common.out, out);
  write_predictions(sink.get(), rows);
  sink.close();
}

struct EvaluateArgs {
  Common common;
  std::string pred, gold;
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto cfg = a.common.load();
  const auto gold = load_labeled(pick(a.gold, cfg.val_path, "gold dataset"));
  const auto report = evaluate(read_predictions(a.pred), gold_labels(gold));
  Sink sink(a.common.out, out);
  sink.get() << to_json(report).dump(2) << '\n';
  sink.close();
}

struct AnalyzeArgs {
  Common common;
  std::string gold;
  std::vector<std::string> preds;
  std::string histogram_csv;
};

void cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto cfg = a.common.load();
  if (a.preds.size() < 2) throw Error("analyze needs at least two --pred NAME=PATH files");
  const auto gold_ds = load_labeled(pick(a.gold, cfg.val_path, "gold dataset"));
  const auto gold = gold_labels(gold_ds);

  std::vector<std::pair<std::string, EvalReport>> reports;
  for (const auto& spec : a.preds) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw Error("--pred expects NAME=PATH, got \"" + spec + "\"");
    }
    const auto name = spec.substr(0, eq);
    for (const auto& [existing, r] : reports) {
      if (existing == name) throw Error("duplicate model name " + name);
    }
    reports.emplace_back(name, evaluate(read_predictions(spec.substr(eq + 1)), gold));
  }

  std::vector<IntersectionReport> pairs;
  for (const auto& [base_name, base] : reports) {
    for (const auto& [ref_name, ref] : reports) {
      if (base_name != ref_name) pairs.push_back(intersect_errors(base, ref, base_name, ref_name));
    }
  }
  const auto distribution = feature_distribution_report(gold_ds.tweets);

  nlohmann::json doc;
  doc["models"] = nlohmann::json::object();
  for (const auto& [name, r] : reports) doc["models"][name] = to_json(r);
  doc["intersections"] = nlohmann::json::array();
  for (const auto& p : pairs) doc["intersections"].push_back(to_json(p));
  doc["distribution"] = to_json(distribution);

  write_intersection_table(out, pairs);
  if (!a.common.out.empty()) {
    Sink sink(a.common.out, out);
    sink.get() << doc.dump(2) << '\n';
    sink.close();
  }
  if (!a.histogram_csv.empty()) {
    Sink sink(a.histogram_csv, out);
    write_histogram_csv(sink.get(), distribution);
    sink.close();
  }
}

struct HashEmbedArgs {
  Common common;
  std::string in;
  std::size_t dim = 0;
  CLI::Option* dim_opt = nullptr;
};

void cmd_hash_embed(const HashEmbedArgs& a, std::ostream& out) {
  auto cfg = a.common.load();
  if (a.dim_opt->count()) cfg.embedder_dim = a.dim;
  if (a.common.has_seed()) cfg.embedder_seed = a.common.seed;
  if (cfg.embedder_dim == 0) throw Error("--dim must be at least 1");
  const auto ds = read_dataset(pick(a.in, cfg.train_path, "input dataset"));
  EmbeddingMap map;
  for (const auto& tweet : ds.tweets) {
    map[tweet.id] = hash_embed(normalize(tweet, cfg.normalization), cfg.embedder_dim, cfg.embedder_seed);
  }
  Sink sink(a.common.out, out);
  write_embeddings(sink.get(), map);
  sink.close();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tweet informativeness toolkit: normalization, TF-IDF, fusion heads, evaluation"};
  app.name("tweetfuse");
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "Normalize a dataset TSV");
  pre.common.attach(pre_cmd);
  pre_cmd->add_option("--in", pre.in, "Dataset TSV (default: data.train)");
  pre_cmd->add_flag("--tfidf", pre.tfidf, "Emit TF-IDF tokens (stemmed, stopwords removed)");

  FitTfidfArgs fit;
  auto* fit_cmd = app.add_subcommand("fit-tfidf", "Fit a TF-IDF model and write it as JSON");
  fit.common.attach(fit_cmd);
  fit_cmd->add_option("--in", fit.in, "Dataset TSV (default: data.train)");
  fit.max_opt = fit_cmd->add_option("--max-features", fit.max_features)->check(CLI::PositiveNumber);

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train one model and write the model file");
  tr.common.attach(train_cmd);
  train_cmd->add_option("--train", tr.train, "Training TSV (default: data.train)");
  train_cmd->add_option("--embeddings", tr.embeddings, "Embedding JSONL");
  train_cmd->add_option("--ensemble", tr.ensemble, "embedding, prob, tfidf, prob+tfidf or svm");
  train_cmd->add_option("--loss", tr.loss, "HINGE or LOGISTIC");
  tr.epochs_opt = train_cmd->add_option("--epochs", tr.epochs);
  tr.eta0_opt = train_cmd->add_option("--eta0", tr.eta0)->check(CLI::PositiveNumber);
  tr.lambda_opt = train_cmd->add_option("--lambda", tr.lambda)->check(CLI::NonNegativeNumber);
  tr.max_opt = train_cmd->add_option("--max-features", tr.max_features)->check(CLI::PositiveNumber);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train every ensemble x max_features x seed and rank by F1");
  sw.common.attach(sweep_cmd);
  sweep_cmd->add_option("--train", sw.train, "Training TSV (default: data.train)");
  sweep_cmd->add_option("--val", sw.val, "Validation TSV (default: data.val)");
  sweep_cmd->add_option("--embeddings", sw.embeddings, "Embedding JSONL");
  sweep_cmd->add_option("--seeds", sw.seeds, "Comma-separated seeds");
  sweep_cmd->add_option("--max-features", sw.max_features, "Comma-separated TF-IDF caps");
  sweep_cmd->add_option("--ensembles", sw.ensembles, "Comma-separated ensemble names");
  sweep_cmd->add_option("--loss", sw.loss, "HINGE or LOGISTIC for every row");
  sw.threads_opt = sweep_cmd->add_option("--threads", sw.threads)->check(CLI::PositiveNumber);

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "Label a dataset with a trained model");
  pr.common.attach(predict_cmd);
  predict_cmd->add_option("--model", pr.model, "Model file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--in", pr.in, "Dataset TSV (default: data.test)");
  predict_cmd->add_option("--embeddings", pr.embeddings, "Embedding JSONL for file-embedder models");

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold labels");
  ev.common.attach(eval_cmd);
  eval_cmd->add_option("--pred", ev.pred, "Predictions TSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--gold", ev.gold, "Labeled dataset TSV (default: data.val)");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Error intersections and digit-share histograms");
  an.common.attach(analyze_cmd);
  analyze_cmd->add_option("--gold", an.gold, "Labeled dataset TSV (default: data.val)");
  analyze_cmd->add_option("--pred", an.preds, "NAME=PATH predictions, at least two")->required();
  analyze_cmd->add_option("--histogram-csv", an.histogram_csv, "Also write the histogram as CSV");

  HashEmbedArgs he;
  auto* hash_cmd = app.add_subcommand("hash-embed", "Write deterministic hashed embeddings as JSONL");
  he.common.attach(hash_cmd);
  hash_cmd->add_option("--in", he.in, "Dataset TSV (default: data.train)");
  he.dim_opt = hash_cmd->add_option("--dim", he.dim)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*pre_cmd) cmd_preprocess(pre, out);
    if (*fit_cmd) cmd_fit_tfidf(fit, out);
    if (*train_cmd) cmd_train(tr, out, err);
    if (*sweep_cmd) cmd_sweep(sw, out, err);
    if (*predict_cmd) cmd_predict(pr, out);
    if (*eval_cmd) cmd_evaluate(ev, out);
    if (*analyze_cmd) cmd_analyze(an, out);
    if (*hash_cmd) cmd_hash_embed(he, out);
  } catch (const std::exception& e) {
    err << "tweetfuse: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace tweetfuse::cli
