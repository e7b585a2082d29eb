#include "toolforge/text.hpp"

#include <cctype>
#include <sstream>

namespace toolforge {

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::size_t count_tokens(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::size_t n = 0;
    while (in >> tok) ++n;
    return n;
}

TokenCounter default_token_counter() {
    return [](const std::string& s) { return count_tokens(s); };
}

std::string truncate_tokens(const std::string& text, std::size_t n) {
    std::istringstream in(text);
    std::string tok;
    std::string out;
    std::size_t kept = 0;
    while (kept < n && in >> tok) {
        if (kept > 0) out += ' ';
        out += tok;
        ++kept;
    }
    return out;
}

std::vector<std::string> search_terms(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    const std::string pattern = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = text.find(pattern, pos)) != std::string::npos) {
        text.replace(pos, pattern.size(), value);
        pos += value.size();
    }
    return text;
}

}  // namespace toolforge
