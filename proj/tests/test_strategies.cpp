#include <doctest.h>

#include <algorithm>

#include "toolforge/rng.hpp"
#include "toolforge/simenv.hpp"
#include "toolforge/strategies.hpp"

using namespace toolforge;

namespace {

struct TestEnv {
    std::vector<ApiEntry> apis;
    std::shared_ptr<SimExecutor> executor;
};

TestEnv make_env(const std::vector<std::string>& api_names = {"lookup", "fetch", "verify"}) {
    std::vector<SimApiSpec> specs;
    for (const auto& n : api_names) specs.push_back({{"sim", n}});
    auto [hub, executor] = build_sim_hub(specs, {{"sim", "Sim"}});
    TestEnv env;
    env.executor = executor;
    for (const auto& t : hub.tools)
        for (const auto& a : t.api_list) env.apis.push_back({{t.tool_name, a.name}, a});
    return env;
}

ScriptTree linear(std::vector<Action> actions) {
    ScriptTree tree;
    ScriptNode* tail = nullptr;
    for (auto& a : actions) {
        ScriptNode node{std::move(a), {}};
        if (!tail) {
            tree.roots.push_back(std::move(node));
            tail = &tree.roots.back();
        } else {
            tail->children.push_back(std::move(node));
            tail = &tail->children.back();
        }
    }
    return tree;
}

// loop script: N api calls then nothing (policy goes off-script and gives up)
ScriptTree looping_calls(int n) {
    std::vector<Action> actions;
    for (int i = 0; i < n; ++i)
        actions.push_back(Action::api_call("try " + std::to_string(i), "lookup", {{"n", i}}));
    actions.push_back(Action::finish_give_up("out of ideas"));
    return linear(std::move(actions));
}

// independent pre-order traversal used to check visit_order
void preorder(const SearchTree& tree, int node, std::vector<int>& out) {
    out.push_back(node);
    for (int c : tree.nodes.at(node).children) preorder(tree, c, out);
}

// records every query it sees
struct SpyPolicy : Policy {
    ScriptedPolicy inner;
    std::vector<std::vector<std::string>> seen_siblings;
    std::vector<std::string> seen_diversity;
    explicit SpyPolicy(ScriptTree tree) : inner(std::move(tree)) {}
    std::string decide(const PolicyQuery& q) override {
        seen_siblings.push_back(q.prior_siblings);
        seen_diversity.push_back(q.diversity_text);
        return inner.decide(q);
    }
};

}  // namespace

TEST_SUITE("strategies") {

TEST_CASE("react follows a script to the answer") {
    TestEnv env = make_env();
    ScriptedPolicy policy(linear({Action::api_call("call it", "lookup", {{"q", 1}}),
                                  Action::finish_answer("done", "42")}));
    const Episode ep = run_react("task", env.apis, policy, *env.executor, 10);
    CHECK(ep.outcome == EpisodeOutcome::PassCandidate);
    CHECK(ep.policy_calls == 2);
    CHECK_FALSE(ep.tree.has_value());
    CHECK(ep.path.steps.size() == 1);
    CHECK(ep.path.final.final_answer == "42");
    CHECK(ep.expansion_overhead == 0);
}

TEST_CASE("react exhausts its budget on a looping script") {
    TestEnv env = make_env();
    ScriptedPolicy policy(looping_calls(50));
    const Episode ep = run_react("task", env.apis, policy, *env.executor, 5);
    CHECK(ep.outcome == EpisodeOutcome::BudgetExhausted);
    CHECK(ep.policy_calls == 5);
    CHECK(ep.path.final.return_type == ReturnType::give_up_and_restart);
}

TEST_CASE("react records an immediate give-up") {
    TestEnv env = make_env();
    ScriptedPolicy policy(linear({Action::finish_give_up("no idea")}));
    const Episode ep = run_react("task", env.apis, policy, *env.executor, 5);
    CHECK(ep.outcome == EpisodeOutcome::GaveUp);
    CHECK(ep.policy_calls == 1);
}

TEST_CASE("malformed policy output costs a step and the episode continues") {
    TestEnv env = make_env();
    struct Garbler : Policy {
        int calls = 0;
        std::string decide(const PolicyQuery&) override {
            ++calls;
            if (calls == 1) return "complete nonsense";
            return action_to_json(Action::finish_answer("recovered", "ok")).dump();
        }
    } policy;
    const Episode ep = run_react("task", env.apis, policy, *env.executor, 10);
    CHECK(ep.outcome == EpisodeOutcome::PassCandidate);
    CHECK(ep.policy_calls == 2);
    REQUIRE(ep.path.steps.size() == 1);
    CHECK(ep.path.steps[0].observation.rfind("malformed action:", 0) == 0);
}

TEST_CASE("react@n stops at the cost target") {
    TestEnv env = make_env();
    // each trial: 3 api calls then give up = 4 policy calls
    PolicyFactory factory = [&](int) {
        return std::make_unique<ScriptedPolicy>(looping_calls(3));
    };
    SUBCASE("no answer: trials run until cumulative cost reaches the target") {
        const Episode ep = run_react_at_n("task", env.apis, factory, *env.executor, 9, 30);
        CHECK(ep.outcome == EpisodeOutcome::GaveUp);
        CHECK(ep.policy_calls == 12);  // 3 trials x 4 calls
    }
    SUBCASE("cost target 1 still runs one full trial") {
        const Episode ep = run_react_at_n("task", env.apis, factory, *env.executor, 1, 30);
        CHECK(ep.policy_calls == 4);
    }
    SUBCASE("an answering trial stops everything") {
        PolicyFactory answering = [&](int trial) {
            if (trial == 0)
                return std::make_unique<ScriptedPolicy>(
                    linear({Action::api_call("a", "lookup", {{"q", 0}}),
                            Action::api_call("b", "fetch", {{"q", 1}}),
                            Action::finish_answer("done", "42")}));
            return std::make_unique<ScriptedPolicy>(looping_calls(3));
        };
        const Episode ep = run_react_at_n("task", env.apis, answering, *env.executor, 100, 30);
        CHECK(ep.outcome == EpisodeOutcome::PassCandidate);
        CHECK(ep.policy_calls == 3);
    }
}

TEST_CASE("dfsdt backtracks out of a trap to the answering sibling") {
    TestEnv env = make_env();
    // first root branch: api call whose only continuation gives up at depth 2;
    // second root branch answers at depth 2
    ScriptTree tree;
    tree.roots.push_back({Action::api_call("trap", "lookup", {{"n", 0}}),
                          {{Action::finish_give_up("dead end"), {}}}});
    tree.roots.push_back({Action::api_call("promising", "fetch", {{"n", 1}}),
                          {{Action::finish_answer("found", "the answer"), {}}}});
    ScriptedPolicy policy(tree);
    const Episode ep = run_dfsdt("task", env.apis, policy, *env.executor, {10, 2, 12});

    CHECK(ep.outcome == EpisodeOutcome::PassCandidate);
    REQUIRE(ep.tree.has_value());
    CHECK(ep.tree->nodes.at(ep.tree->root).children.size() == 2);
    CHECK(ep.path.steps.size() == 1);
    CHECK(ep.path.steps[0].action.api_name == "fetch");
    CHECK(ep.path.final.final_answer == "the answer");
    // oracle agreement on outcome and cost
    const OracleResult oracle = oracle_search(tree, 10, 2, 12);
    CHECK(oracle.answers);
    CHECK(ep.policy_calls == *oracle.cost_to_answer);
}

TEST_CASE("dfsdt exhausts all-give-up scripts") {
    TestEnv env = make_env();
    ScriptTree tree;
    tree.roots.push_back({Action::finish_give_up("no 1"), {}});
    tree.roots.push_back({Action::finish_give_up("no 2"), {}});
    ScriptedPolicy policy(tree);
    const Episode ep = run_dfsdt("task", env.apis, policy, *env.executor, {6, 2, 12});
    CHECK((ep.outcome == EpisodeOutcome::GaveUp ||
           ep.outcome == EpisodeOutcome::BudgetExhausted));
    CHECK(ep.policy_calls <= 6);
    // visit order is a pre-order prefix of the final tree
    std::vector<int> expect;
    preorder(*ep.tree, ep.tree->root, expect);
    CHECK(ep.tree->visit_order == expect);
}

TEST_CASE("dfsdt degrades to react on give-up-free scripts") {
    TestEnv env = make_env();
    Rng rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Action> actions;
        const int depth = 1 + static_cast<int>(rng.index(6));
        for (int d = 0; d < depth; ++d)
            actions.push_back(Action::api_call("step " + std::to_string(d),
                                               trial % 2 ? "lookup" : "fetch", {{"d", d}}));
        actions.push_back(Action::finish_answer("done", "answer " + std::to_string(trial)));
        const ScriptTree tree = linear(std::move(actions));

        ScriptedPolicy p1(tree), p2(tree);
        const Episode react = run_react("task", env.apis, p1, *env.executor, 30);
        const Episode dfs = run_dfsdt("task", env.apis, p2, *env.executor, {30, 3, 12});
        CHECK(react.policy_calls == dfs.policy_calls);
        CHECK(encode_path(react.path).dump() == encode_path(dfs.path).dump());
    }
}

TEST_CASE("dfsdt answers whenever react answers (first branch identical)") {
    TestEnv env = make_env();
    Rng rng(117);
    for (int trial = 0; trial < 30; ++trial) {
        const ScriptTree tree = random_script_tree(rng, 4, 3, {"lookup", "fetch"});
        ScriptedPolicy p1(tree), p2(tree);
        const Episode react = run_react("task", env.apis, p1, *env.executor, 30);
        if (react.outcome == EpisodeOutcome::PassCandidate) {
            const Episode dfs = run_dfsdt("task", env.apis, p2, *env.executor, {30, 3, 12});
            CHECK(dfs.outcome == EpisodeOutcome::PassCandidate);
            CHECK(dfs.policy_calls <= react.policy_calls);
        }
    }
}

TEST_CASE("visit order is the pre-order traversal of the final tree") {
    TestEnv env = make_env();
    Rng rng(515);
    for (int trial = 0; trial < 30; ++trial) {
        const ScriptTree tree = random_script_tree(rng, 5, 3, {"lookup", "fetch", "verify"});
        ScriptedPolicy policy(tree);
        const Episode ep = run_dfsdt("task", env.apis, policy, *env.executor, {25, 3, 12});
        REQUIRE(ep.tree.has_value());
        std::vector<int> expect;
        preorder(*ep.tree, ep.tree->root, expect);
        CHECK(ep.tree->visit_order == expect);
        CHECK(ep.policy_calls <= 25);
        CHECK(ep.tree->budget_spent == ep.policy_calls);
        // ids are created in visit order
        CHECK(std::is_sorted(ep.tree->visit_order.begin(), ep.tree->visit_order.end()));
        // cost accounting: every policy call created exactly one node
        CHECK(ep.policy_calls == static_cast<int>(ep.tree->nodes.size()) - 1);
        int path_cost = ep.path.final.kind == ActionKind::Finish &&
                                ep.outcome != EpisodeOutcome::BudgetExhausted &&
                                ep.outcome != EpisodeOutcome::GaveUp
                            ? 1
                            : 0;
        for (const auto& s : ep.path.steps) path_cost += s.cost;
        if (ep.outcome == EpisodeOutcome::PassCandidate)
            CHECK(path_cost + ep.expansion_overhead == ep.policy_calls);
    }
}

TEST_CASE("react@n cumulative calls stay under target plus one trial") {
    TestEnv env = make_env();
    Rng rng(9090);
    for (int trial = 0; trial < 20; ++trial) {
        const int chain = 1 + static_cast<int>(rng.index(5));
        const int trial_cost = chain + 1;  // api calls + give_up
        PolicyFactory factory = [&](int) {
            return std::make_unique<ScriptedPolicy>(looping_calls(chain));
        };
        const int target = 1 + static_cast<int>(rng.index(20));
        const Episode ep = run_react_at_n("task", env.apis, factory, *env.executor, target, 30);
        CHECK(ep.policy_calls >= std::min(target, trial_cost));
        CHECK(ep.policy_calls < target + trial_cost);
    }
}

TEST_CASE("diversity context lists prior candidates in creation order") {
    TestEnv env = make_env();
    ScriptTree tree;
    tree.roots.push_back({Action::api_call("plan a", "lookup", {{"n", 0}}),
                          {{Action::finish_give_up("no"), {}}}});
    tree.roots.push_back({Action::api_call("plan b", "fetch", {{"n", 1}}),
                          {{Action::finish_give_up("no again"), {}}}});
    tree.roots.push_back({Action::api_call("plan c", "verify", {{"n", 2}}),
                          {{Action::finish_answer("ok", "x"), {}}}});
    SpyPolicy spy(tree);
    const Episode ep = run_dfsdt("task", env.apis, spy, *env.executor, {30, 3, 12});
    CHECK(ep.outcome == EpisodeOutcome::PassCandidate);

    // root expansions are queries 0 (no siblings), then after each trap
    const auto root_queries_with = [&](std::size_t n_siblings) {
        for (const auto& s : spy.seen_siblings)
            if (s.size() == n_siblings) return true;
        return false;
    };
    CHECK(spy.seen_siblings.front().empty());
    CHECK(spy.seen_diversity.front().empty());
    CHECK(root_queries_with(1));
    CHECK(root_queries_with(2));
    // the root's two-sibling query carries both prior candidates verbatim, in
    // creation order (other nodes also reach two siblings via give-up fills)
    const std::string plan_a = render_action(Action::api_call("plan a", "lookup", {{"n", 0}}));
    const std::string plan_b = render_action(Action::api_call("plan b", "fetch", {{"n", 1}}));
    bool found_root_query = false;
    for (std::size_t i = 0; i < spy.seen_siblings.size(); ++i) {
        if (spy.seen_siblings[i].size() == 2 && spy.seen_siblings[i][0] == plan_a) {
            found_root_query = true;
            CHECK(spy.seen_siblings[i][1] == plan_b);
            CHECK(spy.seen_diversity[i].find(plan_a) != std::string::npos);
            CHECK(spy.seen_diversity[i].find(plan_b) != std::string::npos);
        }
    }
    CHECK(found_root_query);
}

TEST_CASE("diversity_context renders empty for leafless nodes") {
    SearchTree tree;
    tree.nodes[0] = SearchNode{0, std::nullopt, 0, std::nullopt, {}, std::nullopt};
    CHECK(diversity_context(tree.nodes[0], tree).empty());
}

TEST_CASE("tree export carries parent links and visit order") {
    TestEnv env = make_env();
    ScriptTree tree;
    tree.roots.push_back({Action::api_call("a", "lookup", {{"n", 0}}),
                          {{Action::finish_answer("ok", "x"), {}}}});
    ScriptedPolicy policy(tree);
    const Episode ep = run_dfsdt("task", env.apis, policy, *env.executor, {10, 2, 12});
    const json doc = export_tree(*ep.tree);
    CHECK(doc["root"] == 0);
    CHECK(doc["visit_order"].size() == ep.tree->visit_order.size());
    CHECK(doc["nodes"].size() == ep.tree->nodes.size());
    bool found_answer_node = false;
    for (const auto& n : doc["nodes"]) {
        if (n.contains("terminal") && n["terminal"] == "Answered") found_answer_node = true;
        if (n["id"] != 0) CHECK(n.contains("parent"));
    }
    CHECK(found_answer_node);
}

TEST_CASE("dfsdt respects the depth cap") {
    TestEnv env = make_env();
    // a linear script deeper than the cap, answering at depth 5
    ScriptTree tree = linear({Action::api_call("1", "lookup", {{"d", 1}}),
                              Action::api_call("2", "lookup", {{"d", 2}}),
                              Action::api_call("3", "lookup", {{"d", 3}}),
                              Action::api_call("4", "lookup", {{"d", 4}}),
                              Action::finish_answer("deep", "won")});
    ScriptedPolicy p1(tree);
    const Episode shallow = run_dfsdt("task", env.apis, p1, *env.executor, {30, 1, 3});
    CHECK(shallow.outcome != EpisodeOutcome::PassCandidate);
    ScriptedPolicy p2(tree);
    const Episode deep = run_dfsdt("task", env.apis, p2, *env.executor, {30, 1, 8});
    CHECK(deep.outcome == EpisodeOutcome::PassCandidate);
}

}  // TEST_SUITE
