#pragma once

#include <string_view>

// Default prompt assets for LLM-backed providers. All of these are plain
// configurable text; nothing in the engine depends on their exact wording.

namespace toolforge::prompts {

inline constexpr std::string_view kSearchSystemPrompt = R"(You are Tool-GPT, capable of utilizing numerous tools and functions to complete the given task.
1.First, I will provide you with the task description, and your task will commence.
2.At each step, you need to analyze the current status and determine the next course of action by executing a function call.
3.Following the call, you will receive the result, transitioning you to a new state. Subsequently, you will analyze your current status, make decisions about the next steps, and repeat this process.
4.After several iterations of thought and function calls, you will ultimately complete the task and provide your final answer.
Remember:
1.The state changes are irreversible, and you cannot return to a previous state.
2.Keep your thoughts concise, limiting them to a maximum of five sentences.
3.You can make multiple attempts. If you plan to try different conditions continuously, perform one condition per try.
4.If you believe you have gathered enough information, call the function "Finish: give_answer" to provide your answer for the task.
5.If you feel unable to handle the task from this step, call the function "Finish: give_up_and_restart".
Let's Begin!
Task description: {task_description})";

inline constexpr std::string_view kDiversityPrompt = R"(This is not the first time you try this task, all previous trails failed.
Before you generate your thought for this state, I will first show you your previous actions for this state, and then you must generate actions that is different from all of them. Here are some previous actions candidates:
{previous_candidate}
Remember you are now in the intermediate state of a trail, you will first analyze the now state and previous action candidates, then make actions that is different from all the previous.)";

inline constexpr std::string_view kFinishDescription =
    "If you believe that you have obtained a result that can answer the task, please call "
    "this function to provide the final answer. Alternatively, if you recognize that you "
    "are unable to proceed with the task in the current state, call this function to "
    "restart. Remember: you must ALWAYS call this function at the end of your attempt, and "
    "the only part that will be shown to the user is the final answer, so it should contain "
    "sufficient information.";

inline constexpr std::string_view kFinalAnswerDescription =
    "The final answer you want to give the user. You should have this field if "
    "\"return_type\"==\"give_answer\"";

inline constexpr std::string_view kSingleToolTaskDescription = R"(You will be provided with a tool, its description, all of the tool's available API functions, the descriptions of these API functions, and the parameters required for each API function. Your task involves creating {count} varied, innovative, and detailed user queries that employ multiple API functions of a tool. Note that you shouldn't ask 'which API to use', rather, simply state your needs that can be addressed by these APIs. Related_apis are apis that can be used for a given query; those related apis have to strictly come from the provided api names. For each query, there should be multiple related_apis; for different queries, overlap of related apis should be as little as possible. Deliver your response in this format: [{Query1: ......, 'related_apis':[api1, api2, api3...]},{Query2: ......, 'related_apis':[api4, api5, api6...]}, ...])";

inline constexpr std::string_view kMultiToolTaskDescription = R"(You will be provided with several tools, tool descriptions, all of each tool's available API functions, the descriptions of these API functions, and the parameters required for each API function. Your task involves creating {count} varied, innovative, and detailed user queries that employ API functions of multiple tools. A query that uses API calls of only one tool will not be accepted. Related APIs are APIs that can be used for a given query; those related APIs have to strictly come from the provided API names. Deliver your response in this format: [{Query1: ......, 'related_apis':[[tool name, api name], [tool name, api name], [tool name, api name]...]},{Query2: ......, 'related_apis':[[tool name, api name], [tool name, api name], [tool name, api name]...]}, ...])";

inline constexpr std::string_view kPassJudgePrompt = R"(You are judging whether a solution path completed the task. Consider first whether the instruction is solvable with the provided APIs. Report, as JSON, the facts of the path: finish_type, tried_all_apis, any_useful_info, answer_resolves (Fully | Partially | Refusal | Hallucinated | Indeterminate), distinct_apis_called, redundant_calls, milestones_hit, information_richness (0-2), factuality (0-2), reasoning (0-2).)";

}  // namespace toolforge::prompts
