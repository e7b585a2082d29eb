#include "toolforge/compression.hpp"

#include <algorithm>
#include <vector>

namespace toolforge {

namespace {

struct KeyPathInfo {
    std::string path;
    std::size_t depth;
    std::size_t tokens;
};

void collect_paths(const json& value, const std::string& prefix, std::size_t depth,
                   const TokenCounter& counter, std::vector<KeyPathInfo>& out) {
    if (!value.is_object()) return;
    for (auto it = value.begin(); it != value.end(); ++it) {
        const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        out.push_back({path, depth, counter(it.value().dump())});
        collect_paths(it.value(), path, depth + 1, counter, out);
    }
}

bool is_descendant(const std::string& path, const std::set<std::string>& dropped) {
    for (const auto& d : dropped) {
        if (path.size() > d.size() && path.compare(0, d.size(), d) == 0 && path[d.size()] == '.')
            return true;
    }
    return false;
}

}  // namespace

json remove_key_paths(json value, const std::set<std::string>& paths) {
    for (const auto& path : paths) {
        json* node = &value;
        std::size_t begin = 0;
        bool found = true;
        std::vector<std::pair<json*, std::string>> chain;
        while (true) {
            std::size_t dot = path.find('.', begin);
            const std::string seg = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
            if (!node->is_object() || !node->contains(seg)) {
                found = false;
                break;
            }
            if (dot == std::string::npos) {
                chain.emplace_back(node, seg);
                break;
            }
            node = &(*node)[seg];
            begin = dot + 1;
        }
        if (found)
            for (auto& [parent, key] : chain) parent->erase(key);
    }
    return value;
}

CompressionSchema RuleBasedProposer::propose(const ApiDoc& doc) {
    CompressionSchema schema;
    schema.max_tokens = max_tokens_;

    json example = json::parse(doc.example_response, nullptr, false);
    if (example.is_discarded() || !example.is_object()) {
        // UnparseableExample: fall back to truncation only
        schema.structured = false;
        return schema;
    }

    std::vector<KeyPathInfo> candidates;
    collect_paths(example, "", 1, counter_, candidates);
    // deepest first, then longest subtree, then path order
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const KeyPathInfo& a, const KeyPathInfo& b) {
                         if (a.depth != b.depth) return a.depth > b.depth;
                         if (a.tokens != b.tokens) return a.tokens > b.tokens;
                         return a.path < b.path;
                     });

    json working = example;
    for (const auto& cand : candidates) {
        if (counter_(working.dump()) <= max_tokens_) break;
        if (is_descendant(cand.path, schema.drop_keys)) continue;
        working = remove_key_paths(std::move(working), {cand.path});
        schema.drop_keys.insert(cand.path);
    }

    std::vector<KeyPathInfo> kept;
    collect_paths(working, "", 1, counter_, kept);
    for (const auto& k : kept) schema.keep_keys.insert(k.path);
    return schema;
}

CompressionSchema derive_compression_schema(const ApiDoc& doc, SchemaProposer& proposer) {
    return proposer.propose(doc);
}

std::string compress_response(const std::string& raw, const CompressionSchema& schema,
                              const TokenCounter& counter) {
    if (counter(raw) <= schema.max_tokens) return raw;

    std::string candidate = raw;
    if (schema.structured && !schema.drop_keys.empty()) {
        json parsed = json::parse(raw, nullptr, false);
        if (!parsed.is_discarded()) {
            candidate = remove_key_paths(std::move(parsed), schema.drop_keys).dump();
            if (counter(candidate) <= schema.max_tokens) return candidate;
        }
    }
    // hard truncation: longest word prefix that fits the configured counter
    // (equals the first max_tokens tokens under the default counter)
    std::size_t lo = 0;
    std::size_t hi = count_tokens(candidate);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (counter(truncate_tokens(candidate, mid)) <= schema.max_tokens)
            lo = mid;
        else
            hi = mid - 1;
    }
    return truncate_tokens(candidate, lo);
}

}  // namespace toolforge
