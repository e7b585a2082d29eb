#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toolforge/rng.hpp"
#include "toolforge/strategies.hpp"
#include "toolforge/tooleval.hpp"

namespace toolforge {

enum class SimFailure { None, Http404, HtmlPage, ErrorBody, Timeout };

std::string to_string(SimFailure f);
SimFailure sim_failure_from_string(const std::string& s);

/// Behavior of one synthetic API endpoint. Placeholders {tool} {api} {params}
/// in the template are substituted per call; response_tokens > 0 pads the
/// payload to exactly that many whitespace tokens.
struct SimApiSpec {
    ApiKey key;
    std::string response_template = "{tool}.{api} ok {params}";
    double latency_ms = 10.0;
    SimFailure failure_mode = SimFailure::None;
    int response_tokens = 0;
    std::vector<ParamSpec> params;

    json to_json() const;
    static SimApiSpec from_json(const json& j);
};

/// Deterministic executor: identical call sequences yield identical results.
class SimExecutor : public ApiExecutor {
public:
    explicit SimExecutor(std::vector<SimApiSpec> specs);

    ApiCallResult call(const ApiKey& key, const json& params) override;
    bool concurrent_safe() const override { return true; }

private:
    std::map<ApiKey, SimApiSpec> specs_;
};

/// Builds a Hub (satisfying all hub invariants) plus its executor from sim
/// specs. categories maps tool name -> category; collections is optional.
std::pair<Hub, std::shared_ptr<SimExecutor>> build_sim_hub(
    const std::vector<SimApiSpec>& specs, const std::map<std::string, std::string>& categories,
    const std::map<std::string, std::vector<std::string>>& collections = {});

/// Finite decision script: the action a policy emits at each (path, sibling
/// slot). Sibling actions must be distinct so replay can locate itself; every
/// leaf is a Finish.
struct ScriptNode {
    Action action;
    std::vector<ScriptNode> children;
};

struct ScriptTree {
    std::vector<ScriptNode> roots;  // candidate first actions, sibling order

    json to_json() const;
    static ScriptTree from_json(const json& j);
    void validate(int max_children = 0) const;
};

/// Replays a ScriptTree: follows the interaction history down the script and
/// emits the (k+1)-th sibling when the diversity context lists k prior
/// candidates. Off-script queries emit a flagged give-up (ScriptExhausted).
class ScriptedPolicy : public Policy {
public:
    explicit ScriptedPolicy(ScriptTree tree) : tree_(std::move(tree)) {}
    /// With a trial seed the policy picks a pseudo-random sibling per depth
    /// instead of the first one — one sampled ReACT trial.
    ScriptedPolicy(ScriptTree tree, std::uint64_t trial_seed)
        : tree_(std::move(tree)), trial_seed_(trial_seed) {}

    std::string decide(const PolicyQuery& query) override;
    bool deterministic() const override { return true; }

    bool exhausted_flagged() const { return exhausted_flagged_; }

private:
    ScriptTree tree_;
    std::optional<std::uint64_t> trial_seed_;
    bool exhausted_flagged_ = false;
};

std::unique_ptr<Policy> scripted_policy(ScriptTree tree);

struct OracleResult {
    bool answers = false;
    std::optional<int> cost_to_answer;
};

/// Exhaustive pre-order enumeration of a script tree with the same budget
/// accounting the tree search uses. Implemented as plain recursion with no
/// code shared with the strategies module; this is the independence anchor
/// for the search equivalence tests.
OracleResult oracle_search(const ScriptTree& tree, int budget, int max_children, int max_depth);

/// Random script tree for equivalence testing: depth <= max_depth, branching
/// <= max_branch, every leaf a Finish.
ScriptTree random_script_tree(Rng& rng, int max_depth, int max_branch,
                              const std::vector<std::string>& api_names);

/// One oracle-verified task whose first branch traps (gives up deep) while a
/// later sibling answers — solvable by backtracking, unsolvable by a single
/// linear rollout.
struct TrapTask {
    std::string instruction;
    ScriptTree script;
    std::vector<ApiEntry> apis;
    TaskMeta meta;
    TaskGroundTruth truth;
};

/// Deterministic suite of trap tasks; every task is admitted only after
/// oracle_search confirms an answering leaf within the given budget.
std::vector<TrapTask> generate_trap_suite(std::uint64_t seed, int count, int budget,
                                          int max_children, int max_depth);

json trap_task_to_json(const TrapTask& task, const std::string& id);
TrapTask trap_task_from_json(const json& j);

/// Small multi-category demo hub with healthy and deliberately broken APIs,
/// for exercising the filter -> generate -> annotate pipeline offline.
std::vector<SimApiSpec> demo_sim_specs(std::uint64_t seed);
std::map<std::string, std::string> demo_sim_categories();
std::map<std::string, std::vector<std::string>> demo_sim_collections();

/// Calls each related API once, then answers with a digest of what came back.
class SimAgentPolicy : public Policy {
public:
    SimAgentPolicy(std::vector<ApiKey> plan, std::string answer_prefix = "Result: ")
        : plan_(std::move(plan)), answer_prefix_(std::move(answer_prefix)) {}

    std::string decide(const PolicyQuery& query) override;
    bool deterministic() const override { return true; }

private:
    std::vector<ApiKey> plan_;
    std::string answer_prefix_;
};

}  // namespace toolforge
