#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace toolforge {

/// Counts tokens in a payload. The default counter splits on whitespace;
/// a model tokenizer can be injected wherever a TokenCounter is accepted.
using TokenCounter = std::function<std::size_t(const std::string&)>;

std::vector<std::string> whitespace_tokens(const std::string& text);

std::size_t count_tokens(const std::string& text);

TokenCounter default_token_counter();

/// First n whitespace tokens, joined by single spaces.
std::string truncate_tokens(const std::string& text, std::size_t n);

/// Lowercased alphanumeric terms, for lexical scoring.
std::vector<std::string> search_terms(const std::string& text);

/// FNV-1a, used where hashes must be stable across platforms and runs.
std::uint64_t fnv1a(const std::string& s);

std::string to_lower(std::string s);

std::string trim(const std::string& s);

/// Replaces every "{key}" occurrence with the given value.
std::string substitute(std::string text, const std::string& key, const std::string& value);

}  // namespace toolforge
