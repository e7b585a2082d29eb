#include "toolforge/hub_io.hpp"

#include <cstdlib>
#include <fstream>

namespace toolforge {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& file, const std::string& content) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    out << content;
}

std::vector<json> read_jsonl(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    std::vector<json> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw DecodeError(file.string() + ":" + std::to_string(lineno) + ": " + e.what(),
                              lineno);
        }
    }
    return records;
}

void write_jsonl(const fs::path& file, const std::vector<json>& records) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + file.string());
    for (const auto& r : records) out << r.dump() << '\n';
}

namespace {

std::string tool_file_name(const std::string& tool_name) {
    std::string out;
    for (char c : tool_name) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
            out += c;
        else
            out += '_';
    }
    return out + ".json";
}

}  // namespace

Hub load_hub(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path)) throw ConfigError("hub: not found at " + dir.string());
    json manifest;
    try {
        manifest = json::parse(read_text_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw DecodeError(manifest_path.string() + ": " + e.what(), e.byte);
    }
    if (!manifest.contains("categories"))
        throw DecodeError(manifest_path.string() + ": missing categories", 0);

    std::vector<ToolDoc> tools;
    for (auto it = manifest["categories"].begin(); it != manifest["categories"].end(); ++it) {
        const std::string category = it.key();
        for (const auto& rel : it.value()) {
            const fs::path tool_path = dir / rel.get<std::string>();
            ToolDoc doc = parse_tool_doc(read_text_file(tool_path));
            if (doc.category.empty()) doc.category = category;
            tools.push_back(std::move(doc));
        }
    }
    return make_hub(std::move(tools));
}

void save_hub(const Hub& hub, const fs::path& dir) {
    fs::create_directories(dir / "tools");
    json categories = json::object();
    for (const auto& t : hub.tools) {
        const std::string rel = "tools/" + tool_file_name(t.tool_name);
        write_text_file(dir / rel, serialize_tool_doc(t).dump(2) + "\n");
        const std::string cat = t.category.empty() ? "Uncategorized" : t.category;
        if (!categories.contains(cat)) categories[cat] = json::array();
        categories[cat].push_back(rel);
    }
    json manifest;
    manifest["categories"] = categories;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::filesystem::path hub_dir_from_env() {
    const char* v = std::getenv("TOOLFORGE_HUB_DIR");
    return v ? fs::path(v) : fs::path();
}

}  // namespace toolforge
