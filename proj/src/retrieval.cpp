#include "toolforge/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "toolforge/rng.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

Embedder hashed_bow_embedder(std::size_t dim) {
    return [dim](const std::string& text) {
        std::vector<double> v(dim, 0.0);
        for (const auto& term : search_terms(text)) v[fnv1a(term) % dim] += 1.0;
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& x : v) x /= norm;
        }
        return v;
    };
}

const ApiRecord* Index::find(const ApiKey& key) const {
    for (const auto& r : records)
        if (r.key == key) return &r;
    return nullptr;
}

Index build_index(const Hub& hub) {
    if (hub.tools.empty()) throw EmptyHub();
    Index index;
    double total_len = 0.0;
    for (const auto& tool : hub.tools) {
        for (const auto& api : tool.api_list) {
            ApiRecord rec;
            rec.key = {tool.tool_name, api.name};
            rec.text = tool.tool_name + " " + tool.tool_description + " " + api.name + " " +
                       api.description + " " + tool.category;
            for (const auto& term : search_terms(rec.text)) ++rec.term_freq[term];
            for (const auto& [term, _] : rec.term_freq) ++index.doc_freq[term];
            rec.length = 0;
            for (const auto& [_, n] : rec.term_freq) rec.length += static_cast<std::size_t>(n);
            total_len += static_cast<double>(rec.length);
            index.records.push_back(std::move(rec));
        }
    }
    index.avg_doc_len = total_len / static_cast<double>(index.records.size());
    return index;
}

void embed_index(Index& index, Embedder embedder) {
    for (auto& r : index.records) r.vector = embedder(r.text);
    index.embedder = std::move(embedder);
}

double bm25_score(const std::string& query, const ApiRecord& record, const Index& index) {
    const double n_docs = static_cast<double>(index.records.size());
    const double k1 = index.params.k1;
    const double b = index.params.b;
    double score = 0.0;
    for (const auto& term : search_terms(query)) {
        auto df_it = index.doc_freq.find(term);
        if (df_it == index.doc_freq.end()) continue;
        auto tf_it = record.term_freq.find(term);
        if (tf_it == record.term_freq.end()) continue;
        const double df = static_cast<double>(df_it->second);
        const double tf = static_cast<double>(tf_it->second);
        const double idf = std::max(0.0, std::log((n_docs - df + 0.5) / (df + 0.5)));
        const double dl = static_cast<double>(record.length);
        score += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / index.avg_doc_len));
    }
    return score;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::pair<ApiKey, double>> retrieve(const std::string& query, const Index& index,
                                                std::size_t k, ScorerKind scorer) {
    std::vector<double> query_vec;
    if (scorer == ScorerKind::embedding) {
        for (const auto& r : index.records)
            if (!r.vector) throw VectorsMissing();
        if (!index.embedder) throw VectorsMissing();
        query_vec = (*index.embedder)(query);
    }

    std::vector<std::pair<ApiKey, double>> scored;
    scored.reserve(index.records.size());
    for (const auto& r : index.records) {
        const double s = scorer == ScorerKind::bm25 ? bm25_score(query, r, index)
                                                    : cosine_similarity(query_vec, *r.vector);
        scored.emplace_back(r.key, s);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

double ndcg_at_k(const std::vector<ApiKey>& ranking, const std::set<ApiKey>& relevant,
                 std::size_t k) {
    if (relevant.empty()) throw EmptyRelevantSet();
    double dcg = 0.0;
    const std::size_t depth = std::min(k, ranking.size());
    for (std::size_t i = 0; i < depth; ++i) {
        if (relevant.count(ranking[i]))
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    double idcg = 0.0;
    const std::size_t ideal = std::min(k, relevant.size());
    for (std::size_t i = 0; i < ideal; ++i)
        idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    return dcg / idcg;
}

json TrainingPair::to_json() const {
    json j;
    j["query"] = query;
    j["positive"] = positive.to_json();
    j["negatives"] = json::array();
    for (const auto& n : negatives) j["negatives"].push_back(n.to_json());
    return j;
}

TrainingPair TrainingPair::from_json(const json& j) {
    TrainingPair p;
    p.query = j.at("query").get<std::string>();
    p.positive = ApiKey::from_json(j.at("positive"));
    for (const auto& n : j.at("negatives")) p.negatives.push_back(ApiKey::from_json(n));
    return p;
}

std::vector<TrainingPair> make_training_pairs(const std::vector<InstructionPair>& pairs,
                                              const Hub& hub, std::size_t negatives_per_query,
                                              std::uint64_t seed) {
    const std::vector<ApiKey> all_keys = hub.api_keys();
    std::set<ApiKey> known(all_keys.begin(), all_keys.end());
    Rng rng(seed);

    std::vector<TrainingPair> out;
    for (const auto& inst : pairs) {
        std::set<ApiKey> relevant(inst.related_apis.begin(), inst.related_apis.end());
        for (const auto& key : inst.related_apis) {
            if (!known.count(key)) throw UnknownApiKey(key.tool, key.api);
        }
        std::vector<ApiKey> candidates;
        for (const auto& key : all_keys)
            if (!relevant.count(key)) candidates.push_back(key);
        for (const auto& key : inst.related_apis) {
            if (candidates.size() < negatives_per_query)
                throw NotEnoughNegatives(negatives_per_query, candidates.size());
            TrainingPair tp;
            tp.query = inst.query;
            tp.positive = key;
            tp.negatives = rng.sample(candidates, negatives_per_query);
            out.push_back(std::move(tp));
        }
    }
    return out;
}

}  // namespace toolforge
