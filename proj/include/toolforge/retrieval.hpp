#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toolforge/instruction.hpp"

namespace toolforge {

using Embedder = std::function<std::vector<double>(const std::string&)>;

/// Deterministic hashed bag-of-words embedder, the offline stand-in for a
/// trained dense encoder.
Embedder hashed_bow_embedder(std::size_t dim = 64);

struct ApiRecord {
    ApiKey key;
    std::string text;
    std::optional<std::vector<double>> vector;
    // cached statistics for scoring
    std::map<std::string, int> term_freq;
    std::size_t length = 0;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Index {
    std::vector<ApiRecord> records;
    std::map<std::string, int> doc_freq;
    double avg_doc_len = 0.0;
    Bm25Params params;
    std::optional<Embedder> embedder;

    const ApiRecord* find(const ApiKey& key) const;
};

enum class ScorerKind { bm25, embedding };

/// One record per API; the searchable text concatenates tool name, tool
/// description, api name, api description and category.
Index build_index(const Hub& hub);

/// Attaches vectors (and the embedder, for query encoding) to every record.
void embed_index(Index& index, Embedder embedder);

/// Okapi BM25 with the index parameters; IDF is floored at zero.
double bm25_score(const std::string& query, const ApiRecord& record, const Index& index);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Top-k by score descending, ties broken by ascending (tool, api) key.
std::vector<std::pair<ApiKey, double>> retrieve(const std::string& query, const Index& index,
                                                std::size_t k, ScorerKind scorer);

/// Binary-gain NDCG with log2(position+1) discount.
double ndcg_at_k(const std::vector<ApiKey>& ranking, const std::set<ApiKey>& relevant,
                 std::size_t k);

struct TrainingPair {
    std::string query;
    ApiKey positive;
    std::vector<ApiKey> negatives;

    json to_json() const;
    static TrainingPair from_json(const json& j);
};

/// One pair per (query, relevant api); negatives drawn uniformly without
/// replacement from the hub minus the instruction's whole relevant set.
std::vector<TrainingPair> make_training_pairs(const std::vector<InstructionPair>& pairs,
                                              const Hub& hub, std::size_t negatives_per_query,
                                              std::uint64_t seed);

}  // namespace toolforge
