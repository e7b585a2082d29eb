#pragma once

#include <string>
#include <vector>

#include "toolforge/api_hub.hpp"

namespace toolforge {

enum class Scenario { I1_single_tool, I2_intra_category, I3_intra_collection };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

inline bool is_multi_tool(Scenario s) { return s != Scenario::I1_single_tool; }

/// One generated (query, relevant APIs) record together with the API subset
/// it was generated from.
struct InstructionPair {
    std::string query;
    std::vector<ApiKey> related_apis;
    Scenario scenario = Scenario::I1_single_tool;
    std::vector<ApiKey> subset;

    bool operator==(const InstructionPair&) const = default;

    json to_json() const;
    static InstructionPair from_json(const json& j);
};

enum class SeedClass { single_tool, multi_tool };

/// Expert-written in-context example regulating the generator's behavior.
struct SeedExample {
    SeedClass scenario_class = SeedClass::single_tool;
    std::string text;

    bool operator==(const SeedExample&) const = default;
};

/// The default seed pools (12 single-tool / 36 multi-tool entries).
std::vector<SeedExample> default_seed_pool();

}  // namespace toolforge
