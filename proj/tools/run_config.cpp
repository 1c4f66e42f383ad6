#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tweetfuse/error.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse::cli {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = unicode::trim(std::string_view(text).substr(start, comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = unicode::ascii_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(key + ": expected a boolean, got \"" + value + "\"");
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw Error(key + ": expected a non-negative integer, got \"" + value + "\"");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw Error(key + ": expected a finite number, got \"" + value + "\"");
  }
  return out;
}

FeatureConfig RunConfig::features() const {
  const auto preset = ensemble_preset(ensemble, tfidf_max_features);
  if (!preset) throw Error("unknown ensemble \"" + ensemble + "\"");
  return *preset;
}

EmbedderSpec RunConfig::embedder() const {
  EmbedderSpec spec;
  spec.kind = embedder_kind.value_or(embeddings_path.empty() ? EmbedderKind::Hash : EmbedderKind::File);
  spec.path = embeddings_path;
  spec.dim = embedder_dim;
  spec.seed = embedder_seed;
  return spec;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error("config " + path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  RunConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const auto positive = [](const std::string& key, std::uint64_t v) {
    if (v == 0) throw Error(key + ": must be at least 1");
    return v;
  };
  const std::map<std::string, std::map<std::string, Setter>> keys{
      {"data",
       {{"train", [&](auto&, auto& v) { c.train_path = v; }},
        {"val", [&](auto&, auto& v) { c.val_path = v; }},
        {"test", [&](auto&, auto& v) { c.test_path = v; }},
        {"embeddings", [&](auto&, auto& v) { c.embeddings_path = v; }}}},
      {"normalize",
       {{"hashtag_segmentation", [&](auto& k, auto& v) { c.normalization.hashtag_segmentation = parse_bool(k, v); }},
        {"strip_emoji", [&](auto& k, auto& v) { c.normalization.strip_emoji = parse_bool(k, v); }},
        {"lowercase", [&](auto& k, auto& v) { c.normalization.lowercase = parse_bool(k, v); }},
        {"corona_mode",
         [&](auto& k, auto& v) {
           const auto mode = parse_corona_mode(v);
           if (!mode) throw Error(k + ": expected STANDARD, DISEASE or OFF, got \"" + v + "\"");
           c.normalization.corona_mode = *mode;
         }},
        {"extra_corona_variants",
         [&](auto&, auto& v) {
           for (auto& variant : split_list(v)) c.normalization.corona_variants.push_back(unicode::ascii_lower(variant));
         }}}},
      {"features",
       {{"ensemble", [&](auto&, auto& v) { c.ensemble = v; }},
        {"tfidf_max_features", [&](auto& k, auto& v) { c.tfidf_max_features = positive(k, parse_uint(k, v)); }}}},
      {"train",
       {{"loss",
         [&](auto& k, auto& v) {
           c.loss = parse_loss_kind(v);
           if (!c.loss) throw Error(k + ": expected HINGE or LOGISTIC, got \"" + v + "\"");
         }},
        {"epochs", [&](auto& k, auto& v) { c.hyper.epochs = parse_uint(k, v); }},
        {"eta0", [&](auto& k, auto& v) { c.hyper.eta0 = parse_real(k, v); }},
        {"lambda", [&](auto& k, auto& v) { c.hyper.lambda = parse_real(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = parse_uint(k, v); }}}},
      {"sweep",
       {{"seeds",
         [&](auto& k, auto& v) {
           c.sweep_seeds.clear();
           for (const auto& s : split_list(v)) c.sweep_seeds.push_back(parse_uint(k, s));
         }},
        {"max_features",
         [&](auto& k, auto& v) {
           c.sweep_max_features.clear();
           for (const auto& s : split_list(v)) c.sweep_max_features.push_back(positive(k, parse_uint(k, s)));
         }},
        {"ensembles", [&](auto&, auto& v) { c.sweep_ensembles = split_list(v); }},
        {"threads", [&](auto& k, auto& v) { c.threads = static_cast<unsigned>(positive(k, parse_uint(k, v))); }}}},
      {"embedder",
       {{"kind",
         [&](auto& k, auto& v) {
           const auto lower = unicode::ascii_lower(v);
           if (lower == "file") {
             c.embedder_kind = EmbedderKind::File;
           } else if (lower == "hash") {
             c.embedder_kind = EmbedderKind::Hash;
           } else {
             throw Error(k + ": expected file or hash, got \"" + v + "\"");
           }
         }},
        {"dim", [&](auto& k, auto& v) { c.embedder_dim = positive(k, parse_uint(k, v)); }},
        {"seed", [&](auto& k, auto& v) { c.embedder_seed = parse_uint(k, v); }}}},
  };

  for (const auto& [section, body] : tree) {
    const auto known = keys.find(section);
    if (known == keys.end()) throw Error("config " + path.string() + ": unknown section [" + section + "]");
    if (!body.data().empty() && body.empty()) {
      throw Error("config " + path.string() + ": key \"" + section + "\" must be inside a section");
    }
    for (const auto& [key, node] : body) {
      const auto setter = known->second.find(key);
      const std::string name = section + "." + key;
      if (setter == known->second.end()) throw Error("config " + path.string() + ": unknown key " + name);
      try {
        setter->second(name, node.data());
      } catch (const Error& e) {
        throw Error("config " + path.string() + ": " + e.what());
      }
    }
  }
  return c;
}

}  // namespace tweetfuse::cli
