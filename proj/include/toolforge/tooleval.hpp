#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toolforge/agent.hpp"

namespace toolforge {

enum class MilestoneKind { CalledApi, AnswerContains, ObservationContains };

/// A named, task-specific predicate over a solution path.
struct Milestone {
    std::string name;
    MilestoneKind kind = MilestoneKind::CalledApi;
    json arg;  // CalledApi: [tool, api] or "api"; *Contains: substring

    json to_json() const;
    static Milestone from_json(const json& j);
};

struct TaskMeta {
    bool solvable = true;
    std::vector<Milestone> milestones;
};

enum class FinishType { give_answer, give_up };
enum class Resolution { Fully, Partially, Refusal, Hallucinated, Indeterminate };

std::string to_string(Resolution r);
Resolution resolution_from_string(const std::string& s);

/// Everything the pass/win rules consume about one solution path. Produced by
/// a judge (LLM-backed in production, rule-based reference here).
struct PathFacts {
    FinishType finish_type = FinishType::give_up;
    bool tried_all_apis = false;
    bool any_useful_info = false;
    Resolution answer_resolves = Resolution::Indeterminate;
    int distinct_apis_called = 0;
    int redundant_calls = 0;
    int milestones_hit = 0;
    // three-level ordinal scores (0..2) for the qualitative win criteria
    int information_richness = 0;
    int factuality = 0;
    int reasoning = 0;

    json to_json() const;
    static PathFacts from_json(const json& j);
};

struct PassLabel {
    PassLabelValue value = PassLabelValue::Unsure;

    bool operator==(const PassLabel&) const = default;
};

enum class PreferenceValue { Win, Lose, Tie };

std::string to_string(PreferenceValue v);
PreferenceValue preference_from_string(const std::string& s);

enum class Criterion {
    PassPrecedence,
    InformationRichness,
    Factuality,
    Reasoning,
    Milestone,
    Exploration,
    Cost
};

std::string to_string(Criterion c);

struct Preference {
    PreferenceValue value = PreferenceValue::Tie;
    std::optional<Criterion> deciding_criterion;  // absent on ties
};

/// Comparison criteria in evaluation order (first strict difference decides).
struct CriteriaConfig {
    std::vector<Criterion> order = {Criterion::InformationRichness, Criterion::Factuality,
                                    Criterion::Reasoning, Criterion::Milestone,
                                    Criterion::Exploration, Criterion::Cost};
};

// --- operations ---

/// The solvability-aware rule tree that turns path facts into Pass/Fail/Unsure.
PassLabel judge_pass_rules(const PathFacts& facts, const TaskMeta& meta);

/// Strict-majority vote over at least 4 labels; no majority means Unsure.
PassLabel aggregate_votes(const std::vector<PassLabel>& labels);

struct JudgedPath {
    const SolutionPath* path = nullptr;
    PathFacts facts;
    PassLabel label;
};

/// Pairwise preference. A Pass beats a Fail outright; equal labels are
/// compared criterion by criterion in the configured order.
Preference compare_paths(const JudgedPath& a, const JudgedPath& b,
                         const CriteriaConfig& criteria = {});

/// Fraction labeled Pass (Unsure counts as not passed).
double pass_rate(const std::vector<PassLabel>& labels);

/// (wins + ties/2) / total.
double win_rate(const std::vector<Preference>& prefs);

/// Win<->Lose swapped, ties kept; win_rate(p) + win_rate(mirror(p)) == 1.
std::vector<Preference> mirror(const std::vector<Preference>& prefs);

int evaluate_milestones(const SolutionPath& path, const TaskMeta& meta);

/// Extracts PathFacts from a solution path. Implementations may call out to a
/// judge model; the reference implementation below is deterministic.
class PathJudge {
public:
    virtual ~PathJudge() = default;
    virtual PathFacts judge(const SolutionPath& path, const TaskMeta& meta) = 0;
};

/// Ground truth about a task, as known to the simulation environment.
struct TaskGroundTruth {
    std::vector<ApiKey> available;
    /// API names whose successful response counts as useful information.
    /// Empty means any successful call counts.
    std::set<std::string> useful_apis;
    /// Substring whose presence in the final answer proves full resolution.
    std::string answer_marker;
};

/// Deterministic fact extractor driven by sim ground truth. Stands in for the
/// LLM judge so evaluation is reproducible offline.
class RuleBasedJudge : public PathJudge {
public:
    explicit RuleBasedJudge(TaskGroundTruth truth) : truth_(std::move(truth)) {}

    PathFacts judge(const SolutionPath& path, const TaskMeta& meta) override;

private:
    TaskGroundTruth truth_;
};

}  // namespace toolforge
