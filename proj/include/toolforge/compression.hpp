#pragma once

#include <set>
#include <string>

#include "toolforge/api_hub.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

/// Per-API recipe for shrinking oversized responses. Key paths are dotted
/// ("data.debug_trace"); dropping a path removes its whole subtree.
struct CompressionSchema {
    std::set<std::string> keep_keys;
    std::set<std::string> drop_keys;
    std::size_t max_tokens = 1024;
    bool structured = true;  // false: example was not key-value, truncation only
};

/// Proposes a CompressionSchema from an API's example response. The shipped
/// implementation is rule-based; an LLM-backed proposer plugs in here.
class SchemaProposer {
public:
    virtual ~SchemaProposer() = default;
    virtual CompressionSchema propose(const ApiDoc& doc) = 0;
};

/// Ranks candidate keys by (depth, subtree token length) and drops them
/// greedily, longest first, until the example response fits max_tokens.
class RuleBasedProposer : public SchemaProposer {
public:
    explicit RuleBasedProposer(std::size_t max_tokens = 1024,
                               TokenCounter counter = default_token_counter())
        : max_tokens_(max_tokens), counter_(std::move(counter)) {}

    CompressionSchema propose(const ApiDoc& doc) override;

private:
    std::size_t max_tokens_;
    TokenCounter counter_;
};

CompressionSchema derive_compression_schema(const ApiDoc& doc, SchemaProposer& proposer);

/// Total function: returns the input when it already fits, otherwise removes
/// drop_keys and, if still over the limit, keeps only the first max_tokens
/// tokens. The result never exceeds schema.max_tokens.
std::string compress_response(const std::string& raw, const CompressionSchema& schema,
                              const TokenCounter& counter = count_tokens);

/// Removes the dotted paths from a JSON value (no-op for paths not present).
json remove_key_paths(json value, const std::set<std::string>& paths);

}  // namespace toolforge
