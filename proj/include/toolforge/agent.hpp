#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toolforge/api_hub.hpp"
#include "toolforge/compression.hpp"

namespace toolforge {

enum class ActionKind { ApiCall, Finish };
enum class ReturnType { give_answer, give_up_and_restart };

/// One agent decision: a thought plus either an API call or a Finish terminal.
struct Action {
    std::string thought;
    ActionKind kind = ActionKind::ApiCall;
    // ApiCall
    std::string api_name;
    json parameters = json::object();
    // Finish
    ReturnType return_type = ReturnType::give_answer;
    std::optional<std::string> final_answer;

    bool operator==(const Action&) const = default;

    static Action api_call(std::string thought, std::string api, json params = json::object());
    static Action finish_answer(std::string thought, std::string answer);
    static Action finish_give_up(std::string thought = "");
};

/// An action together with what came back from the environment.
struct Step {
    Action action;
    std::string observation;  // empty for Finish steps
    int cost = 1;             // policy calls consumed

    bool operator==(const Step&) const = default;
};

enum class EpisodeStatus { Running, FinishedAnswer, GaveUp, BudgetExhausted };

std::string to_string(EpisodeStatus s);

struct EpisodeState {
    std::string instruction;
    std::vector<ApiKey> available_apis;
    std::vector<Step> history;
    EpisodeStatus status = EpisodeStatus::Running;
};

enum class PassLabelValue { Pass, Fail, Unsure };

std::string to_string(PassLabelValue v);
PassLabelValue pass_label_from_string(const std::string& s);

/// The linear (instruction, steps, terminal) record that forms one dataset
/// instance. steps excludes the terminal; final is always a Finish action.
struct SolutionPath {
    std::string instruction;
    std::vector<Step> steps;
    Action final;  // kind == Finish
    std::optional<PassLabelValue> pass_label;

    bool operator==(const SolutionPath&) const = default;
};

/// An API offered to the agent for one episode.
struct ApiEntry {
    ApiKey key;
    ApiDoc doc;
};

// --- operations ---

/// OpenAI-style function schemas for the offered APIs, with the Finish
/// function appended last. Throws DuplicateFunctionName when two APIs
/// sanitize to the same function name.
std::vector<json> render_function_schemas(const std::vector<ApiDoc>& apis);
std::vector<json> render_function_schemas(const std::vector<ApiEntry>& apis);

json finish_function_schema();

/// Function-name charset is [a-zA-Z0-9_-], max 64 chars.
std::string sanitize_function_name(const std::string& name);

/// Accepts the textual "Thought: ... API Name: ... Parameters: {...}" format
/// and the structured function-call form. Throws MalformedAction.
Action parse_action(const std::string& raw);
Action parse_action(const json& raw);
inline Action parse_action(const char* raw) { return parse_action(std::string(raw)); }

/// Canonical textual rendering; parse_action(render_action(a)) == a.
std::string render_action(const Action& a);

json action_to_json(const Action& a);
Action action_from_json(const json& j);

inline const char* kHallucinationPrefix = "hallucinated API: ";
inline const char* kMalformedPrefix = "malformed action: ";

bool is_error_observation(const std::string& observation);

/// Resolves a policy-named function to an offered API. Accepts the exact api
/// name, its sanitized form, or "tool.api".
std::optional<ApiKey> resolve_api(const std::string& api_name,
                                  const std::vector<ApiEntry>& offered);

/// Applies one parsed action to a running episode: known API calls are
/// executed and their responses compressed; unknown APIs become hallucination
/// observations and the episode keeps running; Finish transitions the status.
/// The returned step is also appended to state.history.
Step step(EpisodeState& state, const Action& action, ApiExecutor& executor,
          const CompressionSchema& schema, const std::vector<ApiEntry>& offered);

/// The step recorded when the policy output cannot be parsed at all.
Step make_malformed_step(const std::string& reason);

/// Builds the linear record from an episode history. When the history does
/// not end in a Finish (budget ran out), a give-up terminal is synthesized.
SolutionPath make_solution_path(const std::string& instruction, const std::vector<Step>& history);

json encode_path(const SolutionPath& path);
SolutionPath decode_path(const json& doc);
std::string encode_path_str(const SolutionPath& path);
SolutionPath decode_path_str(const std::string& text);

}  // namespace toolforge
