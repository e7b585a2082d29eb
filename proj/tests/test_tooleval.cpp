#include <doctest.h>

#include <algorithm>

#include "toolforge/rng.hpp"
#include "toolforge/tooleval.hpp"

using namespace toolforge;

namespace {

PathFacts facts(FinishType ft, bool tried_all, bool useful, Resolution res) {
    PathFacts f;
    f.finish_type = ft;
    f.tried_all_apis = tried_all;
    f.any_useful_info = useful;
    f.answer_resolves = res;
    return f;
}

PassLabel rules(const PathFacts& f, bool solvable) {
    TaskMeta meta;
    meta.solvable = solvable;
    return judge_pass_rules(f, meta);
}

std::vector<PassLabel> labels(std::initializer_list<PassLabelValue> vs) {
    std::vector<PassLabel> out;
    for (auto v : vs) out.push_back({v});
    return out;
}

SolutionPath tiny_path(const std::string& answer) {
    SolutionPath p;
    p.instruction = "inst";
    Step s;
    s.action = Action::api_call("call", "lookup", {{"q", 1}});
    s.observation = "sim.lookup ok";
    p.steps = {s};
    p.final = Action::finish_answer("done", answer);
    return p;
}

}  // namespace

TEST_SUITE("tooleval") {

TEST_CASE("the eleven enumerated pass/fail cases") {
    using R = Resolution;
    using F = FinishType;
    const auto P = PassLabelValue::Pass;
    const auto X = PassLabelValue::Fail;
    const auto U = PassLabelValue::Unsure;

    // solvable, give_up
    CHECK(rules(facts(F::give_up, true, false, R::Indeterminate), true).value == P);   // 1a
    CHECK(rules(facts(F::give_up, false, false, R::Indeterminate), true).value == X);  // 1b few apis
    CHECK(rules(facts(F::give_up, true, true, R::Indeterminate), true).value == X);    // 1b useful info
    // solvable, give_answer
    CHECK(rules(facts(F::give_answer, true, false, R::Partially), true).value == P);   // 2a unresolved
    CHECK(rules(facts(F::give_answer, true, false, R::Refusal), true).value == P);     // 2a refusal
    CHECK(rules(facts(F::give_answer, false, true, R::Partially), true).value == X);   // 2b
    CHECK(rules(facts(F::give_answer, false, true, R::Fully), true).value == P);       // 2c
    CHECK(rules(facts(F::give_answer, false, false, R::Indeterminate), true).value == U);  // 2d
    // unsolvable, give_answer
    CHECK(rules(facts(F::give_answer, false, false, R::Fully), false).value == P);         // 1a
    CHECK(rules(facts(F::give_answer, false, false, R::Refusal), false).value == P);       // 1b
    CHECK(rules(facts(F::give_answer, false, false, R::Hallucinated), false).value == X);  // 1c
    // unsolvable, give_up
    CHECK(rules(facts(F::give_up, false, true, R::Indeterminate), false).value == P);  // 2a
}

TEST_CASE("the rule tree is total over the whole fact space") {
    for (bool solvable : {true, false})
        for (int ft = 0; ft < 2; ++ft)
            for (bool tried : {true, false})
                for (bool useful : {true, false})
                    for (int res = 0; res < 5; ++res) {
                        PathFacts f = facts(static_cast<FinishType>(ft), tried, useful,
                                            static_cast<Resolution>(res));
                        CHECK_NOTHROW(rules(f, solvable));
                    }
}

TEST_CASE("majority voting") {
    const auto P = PassLabelValue::Pass;
    const auto X = PassLabelValue::Fail;
    const auto U = PassLabelValue::Unsure;
    CHECK(aggregate_votes(labels({P, P, P, X})).value == P);
    CHECK(aggregate_votes(labels({P, P, X, X})).value == U);  // no strict majority
    CHECK(aggregate_votes(labels({X, X, X, X})).value == X);
    CHECK(aggregate_votes(labels({U, U, U, P})).value == U);
    CHECK_THROWS_AS(aggregate_votes(labels({P, P, X})), TooFewVotes);
}

TEST_CASE("voting is permutation invariant") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<PassLabel> votes;
        const std::size_t n = 4 + rng.index(6);
        for (std::size_t i = 0; i < n; ++i)
            votes.push_back({static_cast<PassLabelValue>(rng.index(3))});
        const PassLabel before = aggregate_votes(votes);
        rng.shuffle(votes);
        CHECK(aggregate_votes(votes).value == before.value);
    }
    // unanimity is idempotent
    CHECK(aggregate_votes(labels({PassLabelValue::Pass, PassLabelValue::Pass,
                                  PassLabelValue::Pass, PassLabelValue::Pass}))
              .value == PassLabelValue::Pass);
}

TEST_CASE("pass precedence decides mixed comparisons") {
    SolutionPath path = tiny_path("x");
    JudgedPath a{&path, facts(FinishType::give_answer, false, true, Resolution::Fully),
                 {PassLabelValue::Pass}};
    JudgedPath b{&path, facts(FinishType::give_up, false, true, Resolution::Indeterminate),
                 {PassLabelValue::Fail}};
    const Preference p = compare_paths(a, b);
    CHECK(p.value == PreferenceValue::Win);
    CHECK(p.deciding_criterion == Criterion::PassPrecedence);
    const Preference q = compare_paths(b, a);
    CHECK(q.value == PreferenceValue::Lose);
}

TEST_CASE("identical facts tie; criteria decide in listed order") {
    SolutionPath path = tiny_path("x");
    PathFacts base = facts(FinishType::give_answer, false, true, Resolution::Fully);
    base.information_richness = 1;
    base.factuality = 1;
    base.reasoning = 1;
    base.milestones_hit = 1;
    base.distinct_apis_called = 2;
    base.redundant_calls = 1;

    JudgedPath a{&path, base, {PassLabelValue::Pass}};
    JudgedPath b{&path, base, {PassLabelValue::Pass}};
    const Preference tie = compare_paths(a, b);
    CHECK(tie.value == PreferenceValue::Tie);
    CHECK_FALSE(tie.deciding_criterion.has_value());

    SUBCASE("milestones break the tie when earlier criteria agree") {
        a.facts.milestones_hit = 3;
        const Preference p = compare_paths(a, b);
        CHECK(p.value == PreferenceValue::Win);
        CHECK(p.deciding_criterion == Criterion::Milestone);
    }
    SUBCASE("richness outranks milestones") {
        a.facts.milestones_hit = 3;
        b.facts.information_richness = 2;
        const Preference p = compare_paths(a, b);
        CHECK(p.value == PreferenceValue::Lose);
        CHECK(p.deciding_criterion == Criterion::InformationRichness);
    }
    SUBCASE("fewer redundant calls wins the cost criterion") {
        b.facts.redundant_calls = 4;
        const Preference p = compare_paths(a, b);
        CHECK(p.value == PreferenceValue::Win);
        CHECK(p.deciding_criterion == Criterion::Cost);
    }
    SUBCASE("unsure operands are rejected") {
        a.label = {PassLabelValue::Unsure};
        CHECK_THROWS_AS(compare_paths(a, b), UnsureOperand);
    }
}

TEST_CASE("comparison is antisymmetric over random fact pairs") {
    Rng rng(33);
    SolutionPath path = tiny_path("x");
    for (int trial = 0; trial < 300; ++trial) {
        auto rand_facts = [&] {
            PathFacts f = facts(FinishType::give_answer, rng.chance(0.5), rng.chance(0.5),
                                Resolution::Fully);
            f.information_richness = static_cast<int>(rng.index(3));
            f.factuality = static_cast<int>(rng.index(3));
            f.reasoning = static_cast<int>(rng.index(3));
            f.milestones_hit = static_cast<int>(rng.index(4));
            f.distinct_apis_called = static_cast<int>(rng.index(4));
            f.redundant_calls = static_cast<int>(rng.index(4));
            return f;
        };
        const PassLabelValue lv = rng.chance(0.5) ? PassLabelValue::Pass : PassLabelValue::Fail;
        JudgedPath a{&path, rand_facts(), {lv}};
        JudgedPath b{&path, rand_facts(), {rng.chance(0.5) ? PassLabelValue::Pass : PassLabelValue::Fail}};
        const Preference ab = compare_paths(a, b);
        const Preference ba = compare_paths(b, a);
        if (ab.value == PreferenceValue::Win) CHECK(ba.value == PreferenceValue::Lose);
        if (ab.value == PreferenceValue::Lose) CHECK(ba.value == PreferenceValue::Win);
        if (ab.value == PreferenceValue::Tie) CHECK(ba.value == PreferenceValue::Tie);
    }
}

TEST_CASE("pass rate arithmetic") {
    const auto P = PassLabelValue::Pass;
    const auto X = PassLabelValue::Fail;
    const auto U = PassLabelValue::Unsure;
    CHECK(pass_rate(labels({P, X, P, U})) == 0.5);
    CHECK(pass_rate(labels({P, P})) == 1.0);
    CHECK(pass_rate(labels({U, U, U})) == 0.0);
    CHECK_THROWS_AS(pass_rate({}), EmptyInput);
}

TEST_CASE("win rate splits ties") {
    using PV = PreferenceValue;
    auto prefs = [](std::initializer_list<PV> vs) {
        std::vector<Preference> out;
        for (auto v : vs) out.push_back({v, std::nullopt});
        return out;
    };
    CHECK(win_rate(prefs({PV::Win, PV::Tie, PV::Lose, PV::Win})) == 0.625);
    CHECK(win_rate(prefs({PV::Tie, PV::Tie})) == 0.5);
    CHECK(win_rate(prefs({PV::Lose, PV::Lose})) == 0.0);
    CHECK_THROWS_AS(win_rate({}), EmptyInput);
}

TEST_CASE("win rate of the mirrored record sums to exactly one") {
    Rng rng(64);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Preference> prefs;
        const std::size_t n = 1 + rng.index(20);
        for (std::size_t i = 0; i < n; ++i)
            prefs.push_back({static_cast<PreferenceValue>(rng.index(3)), std::nullopt});
        CHECK(win_rate(prefs) + win_rate(mirror(prefs)) == 1.0);
    }
}

TEST_CASE("milestones evaluate over the path") {
    SolutionPath p = tiny_path("the rain in Oslo");
    TaskMeta meta;
    meta.milestones.push_back({"called lookup", MilestoneKind::CalledApi, json("lookup")});
    meta.milestones.push_back({"observed ok", MilestoneKind::ObservationContains, json("ok")});
    meta.milestones.push_back({"answered rain", MilestoneKind::AnswerContains, json("rain")});
    meta.milestones.push_back({"answered snow", MilestoneKind::AnswerContains, json("snow")});
    CHECK(evaluate_milestones(p, meta) == 3);
}

TEST_CASE("the rule-based judge extracts facts from sim ground truth") {
    TaskGroundTruth truth;
    truth.available = {{"sim", "lookup"}, {"sim", "fetch"}};
    truth.useful_apis = {"lookup", "fetch"};
    truth.answer_marker = "rain";
    RuleBasedJudge judge(truth);
    TaskMeta meta;

    SUBCASE("a full resolution passes") {
        const SolutionPath p = tiny_path("the rain in Oslo");
        const PathFacts f = judge.judge(p, meta);
        CHECK(f.finish_type == FinishType::give_answer);
        CHECK(f.any_useful_info);
        CHECK(f.distinct_apis_called == 1);
        CHECK_FALSE(f.tried_all_apis);
        CHECK(f.answer_resolves == Resolution::Fully);
        CHECK(judge_pass_rules(f, meta).value == PassLabelValue::Pass);
    }
    SUBCASE("hallucinated calls do not count as exploration") {
        SolutionPath p = tiny_path("no marker here though");
        Step bad;
        bad.action = Action::api_call("?", "made_up_api");
        bad.observation = "hallucinated API: made_up_api";
        p.steps.push_back(bad);
        const PathFacts f = judge.judge(p, meta);
        CHECK(f.distinct_apis_called == 1);
        CHECK(f.answer_resolves == Resolution::Partially);
    }
    SUBCASE("repeated identical calls are redundant") {
        SolutionPath p = tiny_path("the rain again");
        p.steps.push_back(p.steps[0]);
        p.steps.push_back(p.steps[0]);
        const PathFacts f = judge.judge(p, meta);
        CHECK(f.redundant_calls == 2);
    }
    SUBCASE("a refusal is recognized") {
        const SolutionPath p = tiny_path("I'm sorry, but I can't provide this");
        const PathFacts f = judge.judge(p, meta);
        CHECK(f.answer_resolves == Resolution::Refusal);
    }
    SUBCASE("give-up after trying everything passes only without useful info") {
        SolutionPath p;
        p.instruction = "inst";
        for (const auto& name : {"lookup", "fetch"}) {
            Step s;
            s.action = Action::api_call("try", name);
            s.observation = "sim." + std::string(name) + " ok";
            p.steps.push_back(s);
        }
        p.final = Action::finish_give_up("nothing worked");
        const PathFacts f = judge.judge(p, meta);
        CHECK(f.tried_all_apis);
        CHECK(f.any_useful_info);  // responses arrived, so giving up fails
        CHECK(judge_pass_rules(f, meta).value == PassLabelValue::Fail);
    }
}

TEST_CASE("facts serialize round-trip") {
    PathFacts f = facts(FinishType::give_answer, true, false, Resolution::Refusal);
    f.milestones_hit = 2;
    f.information_richness = 2;
    const PathFacts back = PathFacts::from_json(f.to_json());
    CHECK(back.to_json() == f.to_json());
}

}  // TEST_SUITE
