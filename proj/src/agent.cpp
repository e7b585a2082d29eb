#include "toolforge/agent.hpp"

#include <algorithm>
#include <set>

#include "toolforge/prompts.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

Action Action::api_call(std::string thought, std::string api, json params) {
    Action a;
    a.thought = std::move(thought);
    a.kind = ActionKind::ApiCall;
    a.api_name = std::move(api);
    a.parameters = params.is_null() ? json::object() : std::move(params);
    return a;
}

Action Action::finish_answer(std::string thought, std::string answer) {
    Action a;
    a.thought = std::move(thought);
    a.kind = ActionKind::Finish;
    a.return_type = ReturnType::give_answer;
    a.final_answer = std::move(answer);
    return a;
}

Action Action::finish_give_up(std::string thought) {
    Action a;
    a.thought = std::move(thought);
    a.kind = ActionKind::Finish;
    a.return_type = ReturnType::give_up_and_restart;
    return a;
}

std::string to_string(EpisodeStatus s) {
    switch (s) {
        case EpisodeStatus::Running: return "Running";
        case EpisodeStatus::FinishedAnswer: return "FinishedAnswer";
        case EpisodeStatus::GaveUp: return "GaveUp";
        case EpisodeStatus::BudgetExhausted: return "BudgetExhausted";
    }
    return "Running";
}

std::string to_string(PassLabelValue v) {
    switch (v) {
        case PassLabelValue::Pass: return "Pass";
        case PassLabelValue::Fail: return "Fail";
        case PassLabelValue::Unsure: return "Unsure";
    }
    return "Unsure";
}

PassLabelValue pass_label_from_string(const std::string& s) {
    if (s == "Pass") return PassLabelValue::Pass;
    if (s == "Fail") return PassLabelValue::Fail;
    if (s == "Unsure") return PassLabelValue::Unsure;
    throw BadEnum("pass_label", s);
}

std::string sanitize_function_name(const std::string& name) {
    std::string out;
    bool last_us = false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (ok) {
            out += c;
            last_us = (c == '_');
        } else if (!last_us) {
            out += '_';
            last_us = true;
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    while (!out.empty() && out.front() == '_') out.erase(out.begin());
    if (out.size() > 64) out.resize(64);
    if (out.empty()) out = "api";
    return out;
}

json finish_function_schema() {
    json schema;
    schema["name"] = "Finish";
    schema["description"] = std::string(prompts::kFinishDescription);
    schema["parameters"] = {
        {"type", "object"},
        {"properties",
         {{"return_type",
           {{"type", "string"}, {"enum", json::array({"give_answer", "give_up_and_restart"})}}},
          {"final_answer",
           {{"type", "string"}, {"description", std::string(prompts::kFinalAnswerDescription)}}}}},
        {"required", json::array({"return_type"})}};
    return schema;
}

namespace {

json param_schema(const ParamSpec& p) {
    json s;
    switch (p.type) {
        case ParamType::NUMBER: s["type"] = "number"; break;
        case ParamType::BOOLEAN: s["type"] = "boolean"; break;
        case ParamType::ARRAY: s["type"] = "array"; break;
        case ParamType::OBJECT: s["type"] = "object"; break;
        default: s["type"] = "string"; break;
    }
    if (!p.description.empty()) s["description"] = p.description;
    if (!p.default_value.is_null()) s["default"] = p.default_value;
    return s;
}

json api_function_schema(const ApiDoc& api, const std::string& fn_name) {
    json schema;
    schema["name"] = fn_name;
    schema["description"] = api.description;
    json properties = json::object();
    json required = json::array();
    for (const auto& p : api.required_parameters) {
        properties[p.name] = param_schema(p);
        required.push_back(p.name);
    }
    for (const auto& p : api.optional_parameters) properties[p.name] = param_schema(p);
    schema["parameters"] = {{"type", "object"}, {"properties", properties}, {"required", required}};
    return schema;
}

}  // namespace

std::vector<json> render_function_schemas(const std::vector<ApiDoc>& apis) {
    std::vector<json> out;
    std::set<std::string> seen;
    for (const auto& api : apis) {
        const std::string fn = sanitize_function_name(api.name);
        if (!seen.insert(fn).second) throw DuplicateFunctionName(fn);
        out.push_back(api_function_schema(api, fn));
    }
    out.push_back(finish_function_schema());
    return out;
}

std::vector<json> render_function_schemas(const std::vector<ApiEntry>& apis) {
    std::vector<ApiDoc> docs;
    docs.reserve(apis.size());
    for (const auto& e : apis) docs.push_back(e.doc);
    return render_function_schemas(docs);
}

namespace {

Action parse_structured(const json& j) {
    if (!j.is_object() || !j.contains("name")) throw MalformedAction("no function name");
    Action a;
    if (j.contains("thought") && j["thought"].is_string()) a.thought = j["thought"].get<std::string>();
    const std::string name = j["name"].get<std::string>();
    json args = json::object();
    if (j.contains("arguments")) {
        const auto& raw_args = j["arguments"];
        if (raw_args.is_string()) {
            args = json::parse(raw_args.get<std::string>(), nullptr, false);
            if (args.is_discarded()) throw MalformedAction("arguments not valid JSON");
        } else if (raw_args.is_object()) {
            args = raw_args;
        } else {
            throw MalformedAction("arguments must be an object");
        }
    }
    if (name == "Finish") {
        a.kind = ActionKind::Finish;
        if (!args.contains("return_type")) throw MalformedAction("Finish without return_type");
        const std::string rt = args["return_type"].get<std::string>();
        if (rt == "give_answer") {
            a.return_type = ReturnType::give_answer;
            if (!args.contains("final_answer")) throw MalformedAction("give_answer without final_answer");
            a.final_answer = args["final_answer"].get<std::string>();
        } else if (rt == "give_up_and_restart") {
            a.return_type = ReturnType::give_up_and_restart;
        } else {
            throw MalformedAction("unknown return_type: " + rt);
        }
        return a;
    }
    a.kind = ActionKind::ApiCall;
    a.api_name = name;
    if (a.api_name.empty()) throw MalformedAction("empty api name");
    a.parameters = args.is_object() ? args : json::object();
    return a;
}

}  // namespace

Action parse_action(const json& raw) { return parse_structured(raw); }

Action parse_action(const std::string& raw) {
    const std::string text = trim(raw);
    if (!text.empty() && text.front() == '{') {
        json parsed = json::parse(text, nullptr, false);
        if (!parsed.is_discarded()) return parse_structured(parsed);
    }

    const std::size_t t_pos = text.find("Thought:");
    const std::size_t a_pos = text.find("API Name:");
    const std::size_t p_pos = text.find("Parameters:");
    if (a_pos == std::string::npos) throw MalformedAction("missing API Name field");
    if (p_pos == std::string::npos || p_pos < a_pos) throw MalformedAction("missing Parameters field");

    Action a;
    if (t_pos != std::string::npos && t_pos < a_pos) {
        std::string thought = trim(text.substr(t_pos + 8, a_pos - (t_pos + 8)));
        while (!thought.empty() && (thought.back() == ',' || thought.back() == ';')) {
            thought.pop_back();
            thought = trim(thought);
        }
        a.thought = thought;
    }
    std::string name = trim(text.substr(a_pos + 9, p_pos - (a_pos + 9)));
    while (!name.empty() && (name.back() == ',' || name.back() == ';' || name.back() == '.')) {
        name.pop_back();
        name = trim(name);
    }
    if (name.empty()) throw MalformedAction("empty api name");

    const std::string params_text = trim(text.substr(p_pos + 11));
    json params = json::parse(params_text, nullptr, false);
    if (params.is_discarded() || !params.is_object())
        throw MalformedAction("parameters not a JSON object");

    if (name == "Finish") {
        json call = {{"name", "Finish"}, {"arguments", params}, {"thought", a.thought}};
        return parse_structured(call);
    }
    a.kind = ActionKind::ApiCall;
    a.api_name = name;
    a.parameters = params;
    return a;
}

std::string render_action(const Action& a) {
    std::string out = "Thought: " + a.thought + "\nAPI Name: ";
    if (a.kind == ActionKind::Finish) {
        json args;
        args["return_type"] =
            a.return_type == ReturnType::give_answer ? "give_answer" : "give_up_and_restart";
        if (a.final_answer) args["final_answer"] = *a.final_answer;
        out += "Finish\nParameters: " + args.dump();
    } else {
        out += a.api_name + "\nParameters: " + a.parameters.dump();
    }
    return out;
}

json action_to_json(const Action& a) {
    json j;
    j["thought"] = a.thought;
    if (a.kind == ActionKind::Finish) {
        j["name"] = "Finish";
        json args;
        args["return_type"] =
            a.return_type == ReturnType::give_answer ? "give_answer" : "give_up_and_restart";
        if (a.final_answer) args["final_answer"] = *a.final_answer;
        j["arguments"] = args;
    } else {
        j["name"] = a.api_name;
        j["arguments"] = a.parameters;
    }
    return j;
}

Action action_from_json(const json& j) { return parse_structured(j); }

bool is_error_observation(const std::string& observation) {
    return observation.rfind(kHallucinationPrefix, 0) == 0 ||
           observation.rfind(kMalformedPrefix, 0) == 0;
}

std::optional<ApiKey> resolve_api(const std::string& api_name,
                                  const std::vector<ApiEntry>& offered) {
    for (const auto& e : offered)
        if (e.key.api == api_name) return e.key;
    for (const auto& e : offered)
        if (sanitize_function_name(e.key.api) == api_name) return e.key;
    for (const auto& e : offered)
        if (e.key.tool + "." + e.key.api == api_name) return e.key;
    return std::nullopt;
}

namespace {

std::string advisory_type_warnings(const Action& action, const ApiDoc& doc) {
    std::string warnings;
    auto check = [&](const ParamSpec& p, bool required) {
        if (!action.parameters.contains(p.name)) {
            if (required) warnings += "[warning: missing required parameter " + p.name + "] ";
            return;
        }
        const json& v = action.parameters[p.name];
        bool ok = true;
        switch (p.type) {
            case ParamType::NUMBER: ok = v.is_number(); break;
            case ParamType::BOOLEAN: ok = v.is_boolean(); break;
            case ParamType::ARRAY: ok = v.is_array(); break;
            case ParamType::OBJECT: ok = v.is_object(); break;
            default: ok = true; break;
        }
        if (!ok)
            warnings += "[warning: parameter " + p.name + " should be " + to_string(p.type) + "] ";
    };
    for (const auto& p : doc.required_parameters) check(p, true);
    for (const auto& p : doc.optional_parameters) check(p, false);
    return warnings;
}

}  // namespace

Step step(EpisodeState& state, const Action& action, ApiExecutor& executor,
          const CompressionSchema& schema, const std::vector<ApiEntry>& offered) {
    if (state.status != EpisodeStatus::Running) throw EpisodeNotRunning();

    Step s;
    s.action = action;
    s.cost = 1;

    if (action.kind == ActionKind::Finish) {
        state.status = action.return_type == ReturnType::give_answer ? EpisodeStatus::FinishedAnswer
                                                                     : EpisodeStatus::GaveUp;
        state.history.push_back(s);
        return s;
    }

    const auto key = resolve_api(action.api_name, offered);
    if (!key) {
        s.observation = std::string(kHallucinationPrefix) + action.api_name;
        state.history.push_back(s);
        return s;
    }

    const ApiDoc* doc = nullptr;
    for (const auto& e : offered)
        if (e.key == *key) doc = &e.doc;

    ApiCallResult result = executor.call(*key, action.parameters);
    std::string observation;
    if (doc) observation += advisory_type_warnings(action, *doc);
    if (!result.transport_ok) {
        observation += "request failed: no response from " + key->str();
    } else if (result.status < 200 || result.status >= 300) {
        observation += "HTTP " + std::to_string(result.status) + ": " + result.body;
    } else {
        observation += result.body;
    }
    s.observation = compress_response(observation, schema);
    state.history.push_back(s);
    return s;
}

Step make_malformed_step(const std::string& reason) {
    Step s;
    s.action = Action::api_call("", "(malformed)");
    s.observation = std::string(kMalformedPrefix) + reason;
    s.cost = 1;
    return s;
}

SolutionPath make_solution_path(const std::string& instruction, const std::vector<Step>& history) {
    SolutionPath path;
    path.instruction = instruction;
    if (!history.empty() && history.back().action.kind == ActionKind::Finish) {
        path.steps.assign(history.begin(), history.end() - 1);
        path.final = history.back().action;
    } else {
        path.steps = history;
        path.final = Action::finish_give_up("ran out of budget before finishing");
    }
    return path;
}

json encode_path(const SolutionPath& path) {
    json doc;
    doc["instruction"] = path.instruction;
    doc["steps"] = json::array();
    for (const auto& s : path.steps) {
        json sj;
        sj["thought"] = s.action.thought;
        if (s.action.kind == ActionKind::ApiCall) {
            sj["api_name"] = s.action.api_name;
            sj["parameters"] = s.action.parameters;
        } else {
            sj["return_type"] = s.action.return_type == ReturnType::give_answer
                                    ? "give_answer"
                                    : "give_up_and_restart";
            if (s.action.final_answer) sj["final_answer"] = *s.action.final_answer;
        }
        sj["observation"] = s.observation;
        sj["cost"] = s.cost;
        doc["steps"].push_back(std::move(sj));
    }
    json fin;
    fin["return_type"] = path.final.return_type == ReturnType::give_answer
                             ? "give_answer"
                             : "give_up_and_restart";
    if (path.final.final_answer) fin["final_answer"] = *path.final.final_answer;
    if (!path.final.thought.empty()) fin["thought"] = path.final.thought;
    doc["final"] = std::move(fin);
    if (path.pass_label) doc["pass_label"] = to_string(*path.pass_label);
    return doc;
}

SolutionPath decode_path(const json& doc) {
    if (!doc.is_object()) throw DecodeError("path document must be an object", 0);
    if (!doc.contains("instruction")) throw DecodeError("missing instruction", 0);
    if (!doc.contains("final")) throw DecodeError("missing final", 0);
    SolutionPath path;
    path.instruction = doc["instruction"].get<std::string>();
    if (doc.contains("steps")) {
        std::size_t idx = 0;
        for (const auto& sj : doc["steps"]) {
            Step s;
            if (sj.contains("thought")) s.action.thought = sj["thought"].get<std::string>();
            if (sj.contains("return_type")) {
                s.action.kind = ActionKind::Finish;
                const std::string rt = sj["return_type"].get<std::string>();
                s.action.return_type =
                    rt == "give_answer" ? ReturnType::give_answer : ReturnType::give_up_and_restart;
                if (sj.contains("final_answer"))
                    s.action.final_answer = sj["final_answer"].get<std::string>();
            } else if (sj.contains("api_name")) {
                s.action.kind = ActionKind::ApiCall;
                s.action.api_name = sj["api_name"].get<std::string>();
                if (sj.contains("parameters")) s.action.parameters = sj["parameters"];
            } else {
                throw DecodeError("step " + std::to_string(idx) + " has neither api_name nor return_type", idx);
            }
            if (sj.contains("observation")) s.observation = sj["observation"].get<std::string>();
            if (sj.contains("cost")) s.cost = sj["cost"].get<int>();
            path.steps.push_back(std::move(s));
            ++idx;
        }
    }
    const json& fin = doc["final"];
    if (!fin.contains("return_type")) throw DecodeError("final missing return_type", 0);
    path.final.kind = ActionKind::Finish;
    const std::string rt = fin["return_type"].get<std::string>();
    if (rt == "give_answer")
        path.final.return_type = ReturnType::give_answer;
    else if (rt == "give_up_and_restart")
        path.final.return_type = ReturnType::give_up_and_restart;
    else
        throw DecodeError("unknown return_type: " + rt, 0);
    if (fin.contains("final_answer")) path.final.final_answer = fin["final_answer"].get<std::string>();
    if (fin.contains("thought")) path.final.thought = fin["thought"].get<std::string>();
    if (doc.contains("pass_label"))
        path.pass_label = pass_label_from_string(doc["pass_label"].get<std::string>());
    return path;
}

std::string encode_path_str(const SolutionPath& path) { return encode_path(path).dump(); }

SolutionPath decode_path_str(const std::string& text) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DecodeError(e.what(), e.byte);
    }
    return decode_path(parsed);
}

}  // namespace toolforge
