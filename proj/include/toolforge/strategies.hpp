#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toolforge/agent.hpp"

namespace toolforge {

/// Everything a step policy sees for one decision.
struct PolicyQuery {
    const std::string* instruction = nullptr;
    const std::vector<json>* function_schemas = nullptr;
    const std::vector<Step>* history = nullptr;
    /// Rendered summaries of previously generated sibling candidates, in
    /// creation order. Empty on the first expansion of a node and always
    /// empty for linear (ReACT) search.
    std::vector<std::string> prior_siblings;
    /// The diversity message built from prior_siblings ("" when none).
    std::string diversity_text;
};

/// One decision maker (live chat model, scripted replay, ...). Every decide()
/// invocation costs exactly one budget unit.
class Policy {
public:
    virtual ~Policy() = default;
    /// Raw action output; the run loop parses it with parse_action.
    virtual std::string decide(const PolicyQuery& query) = 0;
    virtual bool deterministic() const { return false; }
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(int trial_index)>;

enum class NodeTerminal { Answered, GaveUp };

struct SearchNode {
    int id = 0;
    std::optional<int> parent;
    int depth = 0;
    std::optional<Step> incoming_step;
    std::vector<int> children;  // creation order
    std::optional<NodeTerminal> terminal;
};

struct SearchTree {
    std::map<int, SearchNode> nodes;
    int root = 0;
    std::vector<int> visit_order;
    int budget_spent = 0;
};

/// Node-list export with parent links, for visualization tooling.
json export_tree(const SearchTree& tree);

enum class EpisodeOutcome { PassCandidate, GaveUp, BudgetExhausted };

std::string to_string(EpisodeOutcome o);

struct Episode {
    EpisodeOutcome outcome = EpisodeOutcome::GaveUp;
    SolutionPath path;
    std::optional<SearchTree> tree;
    int policy_calls = 0;
    /// Policy calls spent on branches that did not end up in path.
    int expansion_overhead = 0;
};

struct SearchLimits {
    int budget = 30;
    int max_children = 3;
    int max_depth = 12;
};

/// Single linear chain: no backtracking, no tree.
Episode run_react(const std::string& instruction, const std::vector<ApiEntry>& apis,
                  Policy& policy, ApiExecutor& executor, int budget,
                  const CompressionSchema& schema = {});

/// Independent ReACT trials (fresh policy per trial) until cumulative policy
/// calls reach cost_target or a trial finds an answer. Returns the first
/// answering episode, otherwise the last one, with cumulative calls recorded.
Episode run_react_at_n(const std::string& instruction, const std::vector<ApiEntry>& apis,
                       const PolicyFactory& make_policy, ApiExecutor& executor, int cost_target,
                       int trial_budget, const CompressionSchema& schema = {});

/// Pre-order depth-first search over a lazily expanded decision tree:
/// children are generated one at a time under a diversity prompt and entered
/// immediately; give-ups, malformed actions and the depth cap prune a branch;
/// the first give_answer terminal ends the search with the root-to-leaf path.
Episode run_dfsdt(const std::string& instruction, const std::vector<ApiEntry>& apis,
                  Policy& policy, ApiExecutor& executor, const SearchLimits& limits,
                  const CompressionSchema& schema = {});

/// Renders the prior sibling candidates of node into the diversity template;
/// empty string when the node has no children yet.
std::string diversity_context(const SearchNode& node, const SearchTree& tree);

/// Per-candidate summaries used inside the diversity message.
std::vector<std::string> sibling_summaries(const SearchNode& node, const SearchTree& tree);

}  // namespace toolforge
