#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "toolforge/instruction.hpp"
#include "toolforge/strategies.hpp"
#include "toolforge/tooleval.hpp"

namespace toolforge {

/// I1: every API of one uniformly chosen tool (capped); I2/I3: 2-5 tools from
/// one category/collection, at most 3 APIs per tool.
std::vector<ApiKey> sample_api_subset(const Hub& hub, Scenario scenario, std::uint64_t seed,
                                      std::size_t single_tool_cap = 16);

/// Three distinct in-context examples for the scenario class, uniform without
/// replacement.
std::vector<SeedExample> select_seeds(const std::vector<SeedExample>& pool, Scenario scenario,
                                      std::uint64_t seed);

struct GenerationRequest {
    const Hub* hub = nullptr;
    std::vector<ApiKey> subset;
    std::vector<SeedExample> seeds;
    Scenario scenario = Scenario::I1_single_tool;
    int count = 10;  // queries requested per call
    std::uint64_t seed = 0;
};

/// Three-part generation prompt: task description, full documentation of each
/// subset API, and the sampled in-context seeds.
std::string build_generation_prompt(const GenerationRequest& request);

/// Produces the bracketed "[{Query1: ..., 'related_apis': [...]}, ...]" text.
/// Backed by a chat model in production; the template generator below is the
/// deterministic offline default.
class InstructionGenerator {
public:
    virtual ~InstructionGenerator() = default;
    virtual std::string generate(const GenerationRequest& request) = 0;
};

class TemplateInstructionGenerator : public InstructionGenerator {
public:
    std::string generate(const GenerationRequest& request) override;
};

/// Parses generator output. Throws GeneratorOutputUnparseable when the
/// bracketed envelope is broken; individual bad records are skipped.
std::vector<InstructionPair> parse_generated_instructions(const std::string& text,
                                                          const GenerationRequest& request);

/// Prompt assembly + generator call + parse + whitespace-normalized dedup.
std::vector<InstructionPair> generate_instructions(const GenerationRequest& request,
                                                   InstructionGenerator& generator);

/// Keeps pairs whose related APIs all exist in their subset; multi-tool
/// scenarios must span at least two tools.
std::vector<InstructionPair> filter_hallucinated(const std::vector<InstructionPair>& pairs);

enum class StrategyKind { react, react_at_n, dfsdt };

std::string to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& s);

struct AnnotateConfig {
    StrategyKind strategy = StrategyKind::dfsdt;
    SearchLimits limits;
    std::uint64_t base_seed = 0;
    int jobs = 1;
};

/// Builds the policy answering one instruction pair (the scripted/sim policy
/// in offline mode, a chat-model provider in production).
using EpisodePolicyFactory =
    std::function<std::unique_ptr<Policy>(const InstructionPair&, std::uint64_t seed)>;

/// Supplies per-pair judge + task metadata.
using JudgeFactory =
    std::function<std::pair<std::unique_ptr<PathJudge>, TaskMeta>(const InstructionPair&)>;

struct AnnotateResult {
    std::vector<SolutionPath> retained;  // exactly the Pass-labeled paths
    json run_log = json::array();        // one record per pair, replay seeds included
};

/// Runs one episode per pair (subset as the available APIs), labels it, and
/// keeps the passing paths.
AnnotateResult annotate_dataset(const std::vector<InstructionPair>& pairs,
                                const AnnotateConfig& config,
                                const EpisodePolicyFactory& make_policy, ApiExecutor& executor,
                                const JudgeFactory& make_judge, const Hub& hub);

}  // namespace toolforge
