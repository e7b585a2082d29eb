#include "toolforge/tooleval.hpp"

#include <algorithm>
#include <map>

#include "toolforge/text.hpp"

namespace toolforge {

json Milestone::to_json() const {
    json j;
    j["name"] = name;
    switch (kind) {
        case MilestoneKind::CalledApi: j["kind"] = "called_api"; break;
        case MilestoneKind::AnswerContains: j["kind"] = "answer_contains"; break;
        case MilestoneKind::ObservationContains: j["kind"] = "observation_contains"; break;
    }
    j["arg"] = arg;
    return j;
}

Milestone Milestone::from_json(const json& j) {
    Milestone m;
    m.name = j.value("name", "");
    const std::string kind = j.value("kind", "called_api");
    if (kind == "called_api")
        m.kind = MilestoneKind::CalledApi;
    else if (kind == "answer_contains")
        m.kind = MilestoneKind::AnswerContains;
    else if (kind == "observation_contains")
        m.kind = MilestoneKind::ObservationContains;
    else
        throw BadEnum("milestone kind", kind);
    if (j.contains("arg")) m.arg = j["arg"];
    return m;
}

std::string to_string(Resolution r) {
    switch (r) {
        case Resolution::Fully: return "Fully";
        case Resolution::Partially: return "Partially";
        case Resolution::Refusal: return "Refusal";
        case Resolution::Hallucinated: return "Hallucinated";
        case Resolution::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

Resolution resolution_from_string(const std::string& s) {
    if (s == "Fully") return Resolution::Fully;
    if (s == "Partially") return Resolution::Partially;
    if (s == "Refusal") return Resolution::Refusal;
    if (s == "Hallucinated") return Resolution::Hallucinated;
    if (s == "Indeterminate") return Resolution::Indeterminate;
    throw BadEnum("answer_resolves", s);
}

json PathFacts::to_json() const {
    json j;
    j["finish_type"] = finish_type == FinishType::give_answer ? "give_answer" : "give_up";
    j["tried_all_apis"] = tried_all_apis;
    j["any_useful_info"] = any_useful_info;
    j["answer_resolves"] = to_string(answer_resolves);
    j["distinct_apis_called"] = distinct_apis_called;
    j["redundant_calls"] = redundant_calls;
    j["milestones_hit"] = milestones_hit;
    j["information_richness"] = information_richness;
    j["factuality"] = factuality;
    j["reasoning"] = reasoning;
    return j;
}

PathFacts PathFacts::from_json(const json& j) {
    PathFacts f;
    const std::string ft = j.value("finish_type", "give_up");
    f.finish_type = ft == "give_answer" ? FinishType::give_answer : FinishType::give_up;
    f.tried_all_apis = j.value("tried_all_apis", false);
    f.any_useful_info = j.value("any_useful_info", false);
    f.answer_resolves = resolution_from_string(j.value("answer_resolves", "Indeterminate"));
    f.distinct_apis_called = j.value("distinct_apis_called", 0);
    f.redundant_calls = j.value("redundant_calls", 0);
    f.milestones_hit = j.value("milestones_hit", 0);
    f.information_richness = j.value("information_richness", 0);
    f.factuality = j.value("factuality", 0);
    f.reasoning = j.value("reasoning", 0);
    return f;
}

std::string to_string(PreferenceValue v) {
    switch (v) {
        case PreferenceValue::Win: return "Win";
        case PreferenceValue::Lose: return "Lose";
        case PreferenceValue::Tie: return "Tie";
    }
    return "Tie";
}

PreferenceValue preference_from_string(const std::string& s) {
    if (s == "Win") return PreferenceValue::Win;
    if (s == "Lose") return PreferenceValue::Lose;
    if (s == "Tie") return PreferenceValue::Tie;
    throw BadEnum("preference", s);
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::PassPrecedence: return "PassPrecedence";
        case Criterion::InformationRichness: return "InformationRichness";
        case Criterion::Factuality: return "Factuality";
        case Criterion::Reasoning: return "Reasoning";
        case Criterion::Milestone: return "Milestone";
        case Criterion::Exploration: return "Exploration";
        case Criterion::Cost: return "Cost";
    }
    return "Cost";
}

PassLabel judge_pass_rules(const PathFacts& facts, const TaskMeta& meta) {
    const bool unresolved_or_refusal = facts.answer_resolves == Resolution::Partially ||
                                       facts.answer_resolves == Resolution::Refusal;
    if (meta.solvable) {
        if (facts.finish_type == FinishType::give_up) {
            // giving up only passes after exhaustive, fruitless exploration
            if (facts.tried_all_apis && !facts.any_useful_info) return {PassLabelValue::Pass};
            return {PassLabelValue::Fail};
        }
        // give_answer
        if (facts.answer_resolves == Resolution::Fully) return {PassLabelValue::Pass};
        if (facts.answer_resolves == Resolution::Indeterminate) return {PassLabelValue::Unsure};
        if (!facts.any_useful_info && facts.tried_all_apis && unresolved_or_refusal)
            return {PassLabelValue::Pass};
        return {PassLabelValue::Fail};
    }
    // unsolvable
    if (facts.finish_type == FinishType::give_up) return {PassLabelValue::Pass};
    switch (facts.answer_resolves) {
        case Resolution::Fully: return {PassLabelValue::Pass};
        case Resolution::Refusal: return {PassLabelValue::Pass};
        case Resolution::Hallucinated: return {PassLabelValue::Fail};
        case Resolution::Indeterminate: return {PassLabelValue::Unsure};
        case Resolution::Partially: return {PassLabelValue::Fail};
    }
    return {PassLabelValue::Unsure};
}

PassLabel aggregate_votes(const std::vector<PassLabel>& labels) {
    if (labels.size() < 4) throw TooFewVotes(labels.size());
    std::map<PassLabelValue, std::size_t> counts;
    for (const auto& l : labels) ++counts[l.value];
    for (const auto& [value, count] : counts) {
        if (count * 2 > labels.size()) return {value};
    }
    return {PassLabelValue::Unsure};
}

namespace {

// positive when a is better on this criterion
int criterion_delta(Criterion c, const PathFacts& a, const PathFacts& b) {
    switch (c) {
        case Criterion::InformationRichness: return a.information_richness - b.information_richness;
        case Criterion::Factuality: return a.factuality - b.factuality;
        case Criterion::Reasoning: return a.reasoning - b.reasoning;
        case Criterion::Milestone: return a.milestones_hit - b.milestones_hit;
        case Criterion::Exploration: return a.distinct_apis_called - b.distinct_apis_called;
        case Criterion::Cost: return b.redundant_calls - a.redundant_calls;  // fewer is better
        case Criterion::PassPrecedence: return 0;
    }
    return 0;
}

}  // namespace

Preference compare_paths(const JudgedPath& a, const JudgedPath& b, const CriteriaConfig& criteria) {
    if (a.label.value == PassLabelValue::Unsure || b.label.value == PassLabelValue::Unsure)
        throw UnsureOperand();
    if (a.label.value != b.label.value) {
        Preference p;
        p.value = a.label.value == PassLabelValue::Pass ? PreferenceValue::Win : PreferenceValue::Lose;
        p.deciding_criterion = Criterion::PassPrecedence;
        return p;
    }
    for (Criterion c : criteria.order) {
        const int delta = criterion_delta(c, a.facts, b.facts);
        if (delta != 0) {
            Preference p;
            p.value = delta > 0 ? PreferenceValue::Win : PreferenceValue::Lose;
            p.deciding_criterion = c;
            return p;
        }
    }
    return {PreferenceValue::Tie, std::nullopt};
}

double pass_rate(const std::vector<PassLabel>& labels) {
    if (labels.empty()) throw EmptyInput("label list");
    std::size_t passed = 0;
    for (const auto& l : labels)
        if (l.value == PassLabelValue::Pass) ++passed;
    return static_cast<double>(passed) / static_cast<double>(labels.size());
}

double win_rate(const std::vector<Preference>& prefs) {
    if (prefs.empty()) throw EmptyInput("preference list");
    double score = 0.0;
    for (const auto& p : prefs) {
        if (p.value == PreferenceValue::Win)
            score += 1.0;
        else if (p.value == PreferenceValue::Tie)
            score += 0.5;
    }
    return score / static_cast<double>(prefs.size());
}

std::vector<Preference> mirror(const std::vector<Preference>& prefs) {
    std::vector<Preference> out = prefs;
    for (auto& p : out) {
        if (p.value == PreferenceValue::Win)
            p.value = PreferenceValue::Lose;
        else if (p.value == PreferenceValue::Lose)
            p.value = PreferenceValue::Win;
    }
    return out;
}

int evaluate_milestones(const SolutionPath& path, const TaskMeta& meta) {
    int hit = 0;
    for (const auto& m : meta.milestones) {
        bool ok = false;
        switch (m.kind) {
            case MilestoneKind::CalledApi: {
                std::string api = m.arg.is_array() ? m.arg[1].get<std::string>()
                                                   : m.arg.get<std::string>();
                for (const auto& s : path.steps) {
                    if (s.action.kind == ActionKind::ApiCall && s.action.api_name == api &&
                        !is_error_observation(s.observation)) {
                        ok = true;
                        break;
                    }
                }
                break;
            }
            case MilestoneKind::AnswerContains: {
                const std::string needle = m.arg.get<std::string>();
                ok = path.final.final_answer &&
                     path.final.final_answer->find(needle) != std::string::npos;
                break;
            }
            case MilestoneKind::ObservationContains: {
                const std::string needle = m.arg.get<std::string>();
                for (const auto& s : path.steps) {
                    if (s.observation.find(needle) != std::string::npos) {
                        ok = true;
                        break;
                    }
                }
                break;
            }
        }
        if (ok) ++hit;
    }
    return hit;
}

namespace {

bool looks_like_refusal(const std::string& answer) {
    const std::string lower = to_lower(answer);
    return lower.find("sorry") != std::string::npos ||
           lower.find("cannot") != std::string::npos ||
           lower.find("can't") != std::string::npos ||
           lower.find("unable") != std::string::npos;
}

}  // namespace

PathFacts RuleBasedJudge::judge(const SolutionPath& path, const TaskMeta& meta) {
    PathFacts facts;
    facts.finish_type = path.final.return_type == ReturnType::give_answer ? FinishType::give_answer
                                                                          : FinishType::give_up;

    std::set<std::string> distinct;
    std::set<std::string> call_fingerprints;
    bool useful = false;
    for (const auto& s : path.steps) {
        if (s.action.kind != ActionKind::ApiCall) continue;
        if (is_error_observation(s.observation)) continue;
        distinct.insert(s.action.api_name);
        const std::string fp = s.action.api_name + "\x1f" + s.action.parameters.dump();
        if (!call_fingerprints.insert(fp).second) ++facts.redundant_calls;
        const bool counts = truth_.useful_apis.empty()
                                ? !s.observation.empty()
                                : truth_.useful_apis.count(s.action.api_name) > 0;
        if (counts) useful = true;
    }
    facts.distinct_apis_called = static_cast<int>(distinct.size());
    facts.any_useful_info = useful;

    std::set<std::string> offered_names;
    for (const auto& k : truth_.available) offered_names.insert(k.api);
    facts.tried_all_apis =
        !offered_names.empty() &&
        std::all_of(offered_names.begin(), offered_names.end(),
                    [&](const std::string& n) { return distinct.count(n) > 0; });

    const std::string answer = path.final.final_answer.value_or("");
    if (facts.finish_type == FinishType::give_up) {
        facts.answer_resolves = Resolution::Indeterminate;
    } else if (!truth_.answer_marker.empty() && answer.find(truth_.answer_marker) != std::string::npos) {
        facts.answer_resolves = Resolution::Fully;
    } else if (looks_like_refusal(answer)) {
        facts.answer_resolves = Resolution::Refusal;
    } else if (answer.empty()) {
        facts.answer_resolves = Resolution::Partially;
    } else if (!useful) {
        // a confident answer with nothing to back it up
        facts.answer_resolves = Resolution::Hallucinated;
    } else {
        facts.answer_resolves =
            truth_.answer_marker.empty() ? Resolution::Indeterminate : Resolution::Partially;
    }

    facts.milestones_hit = evaluate_milestones(path, meta);

    if (answer.empty())
        facts.information_richness = 0;
    else
        facts.information_richness = facts.answer_resolves == Resolution::Fully ? 2 : 1;

    switch (facts.answer_resolves) {
        case Resolution::Fully: facts.factuality = 2; break;
        case Resolution::Hallucinated: facts.factuality = 0; break;
        default: facts.factuality = 1; break;
    }

    if (facts.answer_resolves == Resolution::Fully ||
        (facts.finish_type == FinishType::give_up && facts.tried_all_apis))
        facts.reasoning = 2;
    else
        facts.reasoning = facts.distinct_apis_called > 0 ? 1 : 0;

    return facts;
}

}  // namespace toolforge
