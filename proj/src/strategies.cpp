#include "toolforge/strategies.hpp"

#include <numeric>

#include "toolforge/prompts.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

std::string to_string(EpisodeOutcome o) {
    switch (o) {
        case EpisodeOutcome::PassCandidate: return "PassCandidate";
        case EpisodeOutcome::GaveUp: return "GaveUp";
        case EpisodeOutcome::BudgetExhausted: return "BudgetExhausted";
    }
    return "GaveUp";
}

std::vector<std::string> sibling_summaries(const SearchNode& node, const SearchTree& tree) {
    std::vector<std::string> out;
    for (int cid : node.children) {
        const SearchNode& child = tree.nodes.at(cid);
        if (child.incoming_step) out.push_back(render_action(child.incoming_step->action));
    }
    return out;
}

std::string diversity_context(const SearchNode& node, const SearchTree& tree) {
    const auto summaries = sibling_summaries(node, tree);
    if (summaries.empty()) return "";
    std::string joined;
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        joined += "Candidate " + std::to_string(i + 1) + ":\n" + summaries[i] + "\n";
    }
    return substitute(std::string(prompts::kDiversityPrompt), "previous_candidate", joined);
}

json export_tree(const SearchTree& tree) {
    json out;
    out["root"] = tree.root;
    out["budget_spent"] = tree.budget_spent;
    out["visit_order"] = tree.visit_order;
    out["nodes"] = json::array();
    for (const auto& [id, node] : tree.nodes) {
        json nj;
        nj["id"] = id;
        if (node.parent) nj["parent"] = *node.parent;
        nj["depth"] = node.depth;
        nj["children"] = node.children;
        if (node.terminal)
            nj["terminal"] = *node.terminal == NodeTerminal::Answered ? "Answered" : "GaveUp";
        if (node.incoming_step) {
            nj["action"] = action_to_json(node.incoming_step->action);
            nj["observation"] = node.incoming_step->observation;
            nj["cost"] = node.incoming_step->cost;
        }
        out["nodes"].push_back(std::move(nj));
    }
    return out;
}

namespace {

std::vector<ApiKey> keys_of(const std::vector<ApiEntry>& apis) {
    std::vector<ApiKey> keys;
    keys.reserve(apis.size());
    for (const auto& e : apis) keys.push_back(e.key);
    return keys;
}

int history_cost(const std::vector<Step>& history) {
    int total = 0;
    for (const auto& s : history) total += s.cost;
    return total;
}

/// Parses and applies one raw policy output against an ephemeral state.
Step materialize_step(const std::string& raw, const std::string& instruction,
                      const std::vector<ApiEntry>& apis, const std::vector<ApiKey>& keys,
                      const std::vector<Step>& history, ApiExecutor& executor,
                      const CompressionSchema& schema, EpisodeStatus& status_out) {
    EpisodeState state;
    state.instruction = instruction;
    state.available_apis = keys;
    state.history = history;
    try {
        const Action action = parse_action(raw);
        Step s = step(state, action, executor, schema, apis);
        status_out = state.status;
        return s;
    } catch (const MalformedAction& e) {
        status_out = EpisodeStatus::Running;
        return make_malformed_step(e.reason);
    }
}

}  // namespace

Episode run_react(const std::string& instruction, const std::vector<ApiEntry>& apis,
                  Policy& policy, ApiExecutor& executor, int budget,
                  const CompressionSchema& schema) {
    const auto schemas = render_function_schemas(apis);
    const auto keys = keys_of(apis);

    std::vector<Step> history;
    EpisodeStatus status = EpisodeStatus::Running;
    int calls = 0;
    while (status == EpisodeStatus::Running && calls < budget) {
        PolicyQuery query;
        query.instruction = &instruction;
        query.function_schemas = &schemas;
        query.history = &history;
        const std::string raw = policy.decide(query);
        ++calls;
        history.push_back(
            materialize_step(raw, instruction, apis, keys, history, executor, schema, status));
    }

    Episode ep;
    ep.policy_calls = calls;
    ep.path = make_solution_path(instruction, history);
    ep.expansion_overhead = calls - history_cost(history);
    switch (status) {
        case EpisodeStatus::FinishedAnswer: ep.outcome = EpisodeOutcome::PassCandidate; break;
        case EpisodeStatus::GaveUp: ep.outcome = EpisodeOutcome::GaveUp; break;
        default: ep.outcome = EpisodeOutcome::BudgetExhausted; break;
    }
    return ep;
}

Episode run_react_at_n(const std::string& instruction, const std::vector<ApiEntry>& apis,
                       const PolicyFactory& make_policy, ApiExecutor& executor, int cost_target,
                       int trial_budget, const CompressionSchema& schema) {
    int cumulative = 0;
    int trial = 0;
    Episode result;
    while (true) {
        auto policy = make_policy(trial);
        Episode ep = run_react(instruction, apis, *policy, executor, trial_budget, schema);
        cumulative += ep.policy_calls;
        const bool answered = ep.outcome == EpisodeOutcome::PassCandidate;
        const int own_calls = ep.policy_calls;
        result = std::move(ep);
        result.policy_calls = cumulative;
        result.expansion_overhead = cumulative - own_calls;
        ++trial;
        if (answered || cumulative >= cost_target) break;
    }
    return result;
}

Episode run_dfsdt(const std::string& instruction, const std::vector<ApiEntry>& apis,
                  Policy& policy, ApiExecutor& executor, const SearchLimits& limits,
                  const CompressionSchema& schema) {
    const auto schemas = render_function_schemas(apis);
    const auto keys = keys_of(apis);

    SearchTree tree;
    tree.nodes[0] = SearchNode{0, std::nullopt, 0, std::nullopt, {}, std::nullopt};
    tree.root = 0;
    tree.visit_order = {0};

    int calls = 0;
    int next_id = 1;
    int current = 0;
    int last_created = 0;
    std::optional<int> answered_node;
    bool budget_hit = false;

    auto history_of = [&](int id) {
        std::vector<Step> steps;
        for (int cursor = id; cursor != tree.root;) {
            const SearchNode& n = tree.nodes.at(cursor);
            steps.push_back(*n.incoming_step);
            cursor = *n.parent;
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    };

    auto expandable = [&](const SearchNode& n) {
        if (n.terminal) return false;  // explicit Finish leaves
        if (n.incoming_step &&
            n.incoming_step->observation.rfind(kMalformedPrefix, 0) == 0)
            return false;
        if (n.depth >= limits.max_depth) return false;
        return static_cast<int>(n.children.size()) < limits.max_children;
    };

    while (true) {
        SearchNode& cur = tree.nodes.at(current);
        if (!expandable(cur)) {
            if (current == tree.root) break;  // whole tree exhausted
            current = *cur.parent;            // deepest ancestor with remaining slots
            continue;
        }
        if (calls >= limits.budget) {
            budget_hit = true;
            break;
        }

        const std::vector<Step> history = history_of(current);
        PolicyQuery query;
        query.instruction = &instruction;
        query.function_schemas = &schemas;
        query.history = &history;
        query.prior_siblings = sibling_summaries(cur, tree);
        query.diversity_text = diversity_context(cur, tree);
        const std::string raw = policy.decide(query);
        ++calls;

        EpisodeStatus status = EpisodeStatus::Running;
        Step incoming =
            materialize_step(raw, instruction, apis, keys, history, executor, schema, status);

        const int id = next_id++;
        SearchNode child;
        child.id = id;
        child.parent = current;
        child.depth = cur.depth + 1;
        child.incoming_step = std::move(incoming);
        if (status == EpisodeStatus::FinishedAnswer)
            child.terminal = NodeTerminal::Answered;
        else if (status == EpisodeStatus::GaveUp)
            child.terminal = NodeTerminal::GaveUp;
        cur.children.push_back(id);
        tree.nodes[id] = std::move(child);
        tree.visit_order.push_back(id);
        last_created = id;

        if (tree.nodes.at(id).terminal == NodeTerminal::Answered) {
            answered_node = id;
            break;
        }
        current = id;  // enter the new node immediately (pre-order)
    }

    tree.budget_spent = calls;

    Episode ep;
    ep.policy_calls = calls;
    const int path_node = answered_node.value_or(last_created);
    const std::vector<Step> final_history = history_of(path_node);
    ep.path = make_solution_path(instruction, final_history);
    ep.expansion_overhead = calls - history_cost(final_history);
    if (answered_node)
        ep.outcome = EpisodeOutcome::PassCandidate;
    else if (budget_hit)
        ep.outcome = EpisodeOutcome::BudgetExhausted;
    else
        ep.outcome = EpisodeOutcome::GaveUp;
    ep.tree = std::move(tree);
    return ep;
}

}  // namespace toolforge
