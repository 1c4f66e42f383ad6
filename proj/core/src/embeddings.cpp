#include "tweetfuse/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "tweetfuse/error.hpp"
#include "tweetfuse/json_format.hpp"
#include "tweetfuse/unicode.hpp"

namespace tweetfuse {

std::size_t embedding_dim(const EmbeddingMap& embeddings) {
  return embeddings.empty() ? 0 : embeddings.begin()->second.vector.size();
}

EmbeddingMap parse_embeddings(std::istream& in) {
  EmbeddingMap records;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (unicode::trim(line).empty()) continue;

    EmbeddingRecord rec;
    try {
      const auto doc = nlohmann::json::parse(line);
      rec.id = doc.at("id").get<std::string>();
      rec.vector = doc.at("vector").get<std::vector<double>>();
      if (auto it = doc.find("source"); it != doc.end()) rec.source_tag = it->get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed embedding record: ") + e.what(), line_no);
    }
    if (rec.id.empty()) throw ParseError("empty id", line_no);
    if (rec.vector.empty()) throw ParseError("empty vector for id " + rec.id, line_no);
    for (double v : rec.vector) {
      if (!std::isfinite(v)) throw ParseError("non-finite value in vector for id " + rec.id, line_no);
    }
    if (records.empty()) {
      dim = rec.vector.size();
    } else if (rec.vector.size() != dim) {
      throw ParseError("dimension mismatch for id " + rec.id + ": expected " + std::to_string(dim) + ", got " +
                           std::to_string(rec.vector.size()),
                       line_no);
    }
    auto id = rec.id;
    if (records.contains(id)) throw ParseError("duplicate id " + id, line_no);
    records.emplace(std::move(id), std::move(rec));
  }
  return records;
}

EmbeddingMap load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings " + path.string());
  try {
    return parse_embeddings(in);
  } catch (const ParseError& e) {
    throw e.in_context(path.string());
  }
}

void write_embeddings(std::ostream& out, const EmbeddingMap& embeddings) {
  for (const auto& [id, rec] : embeddings) {
    out << "{\"id\": " << nlohmann::json(rec.id).dump() << ", \"vector\": ";
    write_double_array(out, rec.vector);
    out << ", \"source\": " << nlohmann::json(rec.source_tag).dump() << "}\n";
  }
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMap& embeddings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_embeddings(out, embeddings);
  if (!out) throw Error("write failed: " + path.string());
}

std::uint64_t stable_token_hash(std::string_view token, std::uint64_t seed) {
  constexpr std::uint64_t kOffsetBasis = 14695981039346656037ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t h = kOffsetBasis ^ seed;
  for (unsigned char c : token) {
    h ^= c;
    h *= kPrime;
  }
  return h;
}

EmbeddingRecord hash_embed(const TokenStream& stream, std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ContractViolation("hash_embed: dimension must be >= 1");
  EmbeddingRecord rec;
  rec.id = stream.source_id;
  rec.source_tag = "hash-fnv1a:d=" + std::to_string(d) + ":seed=" + std::to_string(seed);
  rec.vector.assign(d, 0.0);
  for (const auto& token : stream.tokens) {
    const auto h = stable_token_hash(token, seed);
    rec.vector[h % d] += (h >> 63) ? -1.0 : 1.0;
  }
  double sum_sq = 0.0;
  for (double v : rec.vector) sum_sq += v * v;
  if (sum_sq > 0.0) {
    const double norm = std::sqrt(sum_sq);
    for (double& v : rec.vector) v /= norm;
  }
  return rec;
}

}  // namespace tweetfuse
