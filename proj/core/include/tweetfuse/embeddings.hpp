#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tweetfuse/normalize.hpp"

namespace tweetfuse {

/// A pooled sentence representation for one tweet. `source_tag` records
/// where it came from (model, pooling token, or the hash embedder).
struct EmbeddingRecord {
  std::string id;
  std::vector<double> vector;
  std::string source_tag;
};

/// Records keyed by tweet id. All vectors in one map share a dimension.
using EmbeddingMap = std::map<std::string, EmbeddingRecord>;

/// Dimension shared by the records, 0 for an empty map.
std::size_t embedding_dim(const EmbeddingMap& embeddings);

/// JSONL: {"id": ..., "vector": [...], "source": ...} per line. Blank
/// lines are skipped. Throws ParseError naming the line for malformed JSON,
/// an empty vector, a dimension mismatch, a duplicate id or a non-finite
/// component.
EmbeddingMap parse_embeddings(std::istream& in);
EmbeddingMap load_embeddings(const std::filesystem::path& path);

/// One line per record in id order; components printed with 17
/// significant digits so they round-trip exactly.
void write_embeddings(std::ostream& out, const EmbeddingMap& embeddings);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMap& embeddings);

/// 64-bit FNV-1a over the token's UTF-8 bytes, with `seed` XOR-ed into the
/// offset basis.
std::uint64_t stable_token_hash(std::string_view token, std::uint64_t seed);

/// Feature-hashing stand-in for a frozen transformer: each token adds +-1
/// at hash % d (sign from the top hash bit), then the vector is
/// L2-normalised. An empty stream gives the zero vector. Throws
/// ContractViolation when d == 0.
EmbeddingRecord hash_embed(const TokenStream& stream, std::size_t d, std::uint64_t seed);

}  // namespace tweetfuse
