#include <doctest.h>

#include "toolforge/rng.hpp"
#include "toolforge/simenv.hpp"
#include "toolforge/text.hpp"

using namespace toolforge;

namespace {

ScriptTree linear_script(std::vector<Action> actions) {
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

}  // namespace

TEST_SUITE("simenv") {

TEST_CASE("build_sim_hub produces a valid hub") {
    std::vector<SimApiSpec> specs;
    std::map<std::string, std::string> cats;
    for (int t = 0; t < 3; ++t)
        for (int a = 0; a < 4; ++a) {
            SimApiSpec s;
            s.key = {"tool" + std::to_string(t), "api" + std::to_string(a)};
            specs.push_back(s);
            cats[s.key.tool] = "Cat" + std::to_string(t);
        }
    auto [hub, executor] = build_sim_hub(specs, cats);
    (void)executor;
    CHECK(hub.api_count() == 12);
    CHECK(hub.tools.size() == 3);
    CHECK(hub.categories.size() == 3);

    SimApiSpec dup;
    dup.key = specs[0].key;
    specs.push_back(dup);
    CHECK_THROWS_AS(SimExecutor{specs}, DuplicateKey);
}

TEST_CASE("failure modes surface through validate_api") {
    SimApiSpec broken;
    broken.key = {"t", "broken"};
    broken.failure_mode = SimFailure::Http404;
    auto [hub, executor] = build_sim_hub({broken}, {{"t", "Sim"}});
    const HealthReport r = validate_api(hub.tools[0].api_list[0], "t", *executor, 2000.0);
    CHECK(r.quality == ResponseQuality::HTTP_ERROR);
    CHECK(r.verdict == Verdict::Discard);
}

TEST_CASE("response_tokens pads the payload to the exact size") {
    SimApiSpec big;
    big.key = {"t", "big"};
    big.response_tokens = 5000;
    SimExecutor exec({big});
    const ApiCallResult res = exec.call(big.key, json::object());
    CHECK(count_tokens(res.body) == 5000);
}

TEST_CASE("executor replays identically") {
    SimApiSpec s;
    s.key = {"t", "x"};
    SimExecutor a({s}), b({s});
    for (int i = 0; i < 5; ++i) {
        const json params = {{"q", i}};
        const auto ra = a.call(s.key, params);
        const auto rb = b.call(s.key, params);
        CHECK(ra.body == rb.body);
        CHECK(ra.status == rb.status);
    }
}

TEST_CASE("unknown keys yield a deterministic 404") {
    SimExecutor exec({});
    const auto r = exec.call({"ghost", "api"}, json::object());
    CHECK(r.status == 404);
}

TEST_CASE("scripted policy replays a linear script") {
    const ScriptTree tree = linear_script(
        {Action::api_call("first", "lookup", {{"q", 1}}), Action::finish_answer("done", "42")});
    ScriptedPolicy policy(tree);

    std::string instruction = "task";
    std::vector<json> schemas;
    std::vector<Step> history;
    PolicyQuery q;
    q.instruction = &instruction;
    q.function_schemas = &schemas;
    q.history = &history;

    const Action first = parse_action(policy.decide(q));
    CHECK(first == Action::api_call("first", "lookup", {{"q", 1}}));
    history.push_back({first, "obs", 1});
    const Action second = parse_action(policy.decide(q));
    CHECK(second == Action::finish_answer("done", "42"));
    CHECK_FALSE(policy.exhausted_flagged());
}

TEST_CASE("diversity context selects the next sibling") {
    ScriptTree tree;
    tree.roots.push_back({Action::api_call("plan a", "lookup", {{"n", 0}}),
                          {{Action::finish_give_up("dead end"), {}}}});
    tree.roots.push_back({Action::api_call("plan b", "fetch", {{"n", 1}}),
                          {{Action::finish_answer("found", "x"), {}}}});
    ScriptedPolicy policy(tree);

    std::string instruction = "task";
    std::vector<json> schemas;
    std::vector<Step> history;
    PolicyQuery q;
    q.instruction = &instruction;
    q.function_schemas = &schemas;
    q.history = &history;

    const Action first = parse_action(policy.decide(q));
    CHECK(first.api_name == "lookup");
    q.prior_siblings = {render_action(first)};
    const Action second = parse_action(policy.decide(q));
    CHECK(second.api_name == "fetch");
}

TEST_CASE("off-script queries give up and are flagged") {
    const ScriptTree tree =
        linear_script({Action::api_call("only", "lookup"), Action::finish_give_up("end")});
    ScriptedPolicy policy(tree);

    std::string instruction = "task";
    std::vector<json> schemas;
    std::vector<Step> history;
    history.push_back({Action::api_call("not in script", "other"), "obs", 1});
    PolicyQuery q;
    q.instruction = &instruction;
    q.function_schemas = &schemas;
    q.history = &history;

    const Action a = parse_action(policy.decide(q));
    CHECK(a.kind == ActionKind::Finish);
    CHECK(a.return_type == ReturnType::give_up_and_restart);
    CHECK(policy.exhausted_flagged());
}

TEST_CASE("script validation rejects broken trees") {
    ScriptTree no_finish;
    no_finish.roots.push_back({Action::api_call("t", "a"), {}});
    CHECK_THROWS_AS(no_finish.validate(), Error);

    ScriptTree dup_siblings;
    dup_siblings.roots.push_back({Action::finish_give_up("same"), {}});
    dup_siblings.roots.push_back({Action::finish_give_up("same"), {}});
    CHECK_THROWS_AS(dup_siblings.validate(), Error);

    ScriptTree interior_finish;
    interior_finish.roots.push_back(
        {Action::finish_give_up("leaf?"), {{Action::finish_give_up("child"), {}}}});
    CHECK_THROWS_AS(interior_finish.validate(), Error);
}

TEST_CASE("oracle_search follows the declared budget accounting") {
    SUBCASE("reachable answer reports its pre-order cost") {
        // slot accounting with max_children=2:
        // call1 root[0] (api) -> call2 its give_up child, call3 phantom slot,
        // call4 root[1] api, call5 answer
        ScriptTree tree;
        tree.roots.push_back({Action::api_call("a", "x", {{"n", 0}}),
                              {{Action::finish_give_up("dead"), {}}}});
        tree.roots.push_back({Action::api_call("b", "y", {{"n", 1}}),
                              {{Action::finish_answer("ok", "ans"), {}}}});
        const OracleResult r = oracle_search(tree, 10, 2, 12);
        CHECK(r.answers);
        CHECK(r.cost_to_answer == 5);
    }
    SUBCASE("budget cuts off an otherwise reachable answer") {
        ScriptTree tree;
        tree.roots.push_back({Action::api_call("a", "x", {{"n", 0}}),
                              {{Action::finish_give_up("dead"), {}}}});
        tree.roots.push_back({Action::api_call("b", "y", {{"n", 1}}),
                              {{Action::finish_answer("ok", "ans"), {}}}});
        const OracleResult r = oracle_search(tree, 4, 2, 12);
        CHECK_FALSE(r.answers);
    }
    SUBCASE("all-give-up trees never answer") {
        ScriptTree tree;
        tree.roots.push_back({Action::finish_give_up("no"), {}});
        const OracleResult r = oracle_search(tree, 50, 3, 12);
        CHECK_FALSE(r.answers);
        CHECK_FALSE(r.cost_to_answer.has_value());
    }
}

TEST_CASE("random script trees satisfy the invariants") {
    Rng rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const ScriptTree tree = random_script_tree(rng, 5, 3, {"a", "b", "c"});
        tree.validate(3);  // throws on violation
        const ScriptTree back = ScriptTree::from_json(tree.to_json());
        CHECK(back.to_json() == tree.to_json());
    }
}

TEST_CASE("trap suites are oracle-verified and sized as requested") {
    const auto suite = generate_trap_suite(9, 8, 30, 3, 12);
    REQUIRE(suite.size() == 8);
    for (const auto& task : suite) {
        const OracleResult r = oracle_search(task.script, 30, 3, 12);
        CHECK(r.answers);
        // the first branch alone never answers: ReACT walks into the trap
        REQUIRE_FALSE(task.script.roots.empty());
        const ScriptNode* node = &task.script.roots.front();
        while (!node->children.empty()) node = &node->children.front();
        CHECK(node->action.kind == ActionKind::Finish);
        CHECK(node->action.return_type == ReturnType::give_up_and_restart);
    }
}

TEST_CASE("sim agent policy calls its plan then answers with a digest") {
    SimAgentPolicy policy(std::vector<ApiKey>{{"t", "a"}, {"t", "b"}});
    std::string instruction = "task";
    std::vector<json> schemas;
    std::vector<Step> history;
    PolicyQuery q;
    q.instruction = &instruction;
    q.function_schemas = &schemas;
    q.history = &history;

    const Action a1 = parse_action(policy.decide(q));
    CHECK(a1.api_name == "a");
    history.push_back({a1, "t.a ok", 1});
    const Action a2 = parse_action(policy.decide(q));
    CHECK(a2.api_name == "b");
    history.push_back({a2, "t.b ok", 1});
    const Action fin = parse_action(policy.decide(q));
    CHECK(fin.kind == ActionKind::Finish);
    REQUIRE(fin.final_answer.has_value());
    CHECK(fin.final_answer->find("t.a ok") != std::string::npos);
    CHECK(fin.final_answer->find("t.b ok") != std::string::npos);
}

}  // TEST_SUITE
