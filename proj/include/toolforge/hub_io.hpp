#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "toolforge/api_hub.hpp"

namespace toolforge {

/// Hub root layout: <dir>/manifest.json mapping category -> tool doc files,
/// one JSON document per tool.
Hub load_hub(const std::filesystem::path& dir);

/// Writes manifest + one tool file per tool; the inverse of load_hub.
void save_hub(const Hub& hub, const std::filesystem::path& dir);

/// Hub root from TOOLFORGE_HUB_DIR when set.
std::filesystem::path hub_dir_from_env();

std::vector<json> read_jsonl(const std::filesystem::path& file);
void write_jsonl(const std::filesystem::path& file, const std::vector<json>& records);

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace toolforge
