#include "toolforge/simenv.hpp"

#include <algorithm>

#include "toolforge/text.hpp"

namespace toolforge {

std::string to_string(SimFailure f) {
    switch (f) {
        case SimFailure::None: return "None";
        case SimFailure::Http404: return "Http404";
        case SimFailure::HtmlPage: return "HtmlPage";
        case SimFailure::ErrorBody: return "ErrorBody";
        case SimFailure::Timeout: return "Timeout";
    }
    return "None";
}

SimFailure sim_failure_from_string(const std::string& s) {
    if (s == "None") return SimFailure::None;
    if (s == "Http404") return SimFailure::Http404;
    if (s == "HtmlPage") return SimFailure::HtmlPage;
    if (s == "ErrorBody") return SimFailure::ErrorBody;
    if (s == "Timeout") return SimFailure::Timeout;
    throw BadEnum("failure_mode", s);
}

json SimApiSpec::to_json() const {
    json j;
    j["key"] = key.to_json();
    j["response_template"] = response_template;
    j["latency_ms"] = latency_ms;
    j["failure_mode"] = to_string(failure_mode);
    j["response_tokens"] = response_tokens;
    if (!params.empty()) {
        j["params"] = json::array();
        for (const auto& p : params)
            j["params"].push_back({{"name", p.name}, {"type", to_string(p.type)}});
    }
    return j;
}

SimApiSpec SimApiSpec::from_json(const json& j) {
    SimApiSpec s;
    s.key = ApiKey::from_json(j.at("key"));
    s.response_template = j.value("response_template", s.response_template);
    s.latency_ms = j.value("latency_ms", 10.0);
    s.failure_mode = sim_failure_from_string(j.value("failure_mode", "None"));
    s.response_tokens = j.value("response_tokens", 0);
    if (j.contains("params")) {
        for (const auto& pj : j["params"]) {
            ParamSpec p;
            p.name = pj.at("name").get<std::string>();
            if (pj.contains("type")) p.type = parse_param_type(pj["type"].get<std::string>());
            s.params.push_back(std::move(p));
        }
    }
    return s;
}

SimExecutor::SimExecutor(std::vector<SimApiSpec> specs) {
    for (auto& s : specs) {
        const ApiKey key = s.key;
        if (!specs_.emplace(key, std::move(s)).second) throw DuplicateKey(key.tool, key.api);
    }
}

namespace {

std::string pad_to_tokens(std::string body, int want) {
    if (want <= 0) return body;
    std::vector<std::string> words = whitespace_tokens(body);
    if (static_cast<int>(words.size()) >= want) {
        words.resize(static_cast<std::size_t>(want));
    } else {
        for (std::size_t i = words.size(); i < static_cast<std::size_t>(want); ++i)
            words.push_back("tok" + std::to_string(i));
    }
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

}  // namespace

ApiCallResult SimExecutor::call(const ApiKey& key, const json& params) {
    auto it = specs_.find(key);
    if (it == specs_.end()) return {true, 404, "404 Not Found: " + key.str(), 5.0};
    const SimApiSpec& spec = it->second;
    switch (spec.failure_mode) {
        case SimFailure::Http404:
            return {true, 404, "404 Not Found", spec.latency_ms};
        case SimFailure::HtmlPage:
            return {true, 200, "<html><head><title>Service</title></head><body>Sign in to continue</body></html>",
                    spec.latency_ms};
        case SimFailure::ErrorBody:
            return {true, 200, json{{"error", "internal error"}, {"data", json::object()}}.dump(),
                    spec.latency_ms};
        case SimFailure::Timeout:
            return {false, 0, "", spec.latency_ms};
        case SimFailure::None:
            break;
    }
    std::string body = spec.response_template;
    body = substitute(body, "tool", key.tool);
    body = substitute(body, "api", key.api);
    body = substitute(body, "params", params.dump());
    return {true, 200, pad_to_tokens(std::move(body), spec.response_tokens), spec.latency_ms};
}

std::pair<Hub, std::shared_ptr<SimExecutor>> build_sim_hub(
    const std::vector<SimApiSpec>& specs, const std::map<std::string, std::string>& categories,
    const std::map<std::string, std::vector<std::string>>& collections) {
    auto executor = std::make_shared<SimExecutor>(specs);

    std::map<std::string, ToolDoc> tools;  // keyed by tool name, insertion via map = sorted
    std::vector<std::string> tool_order;
    for (const auto& s : specs) {
        auto [it, inserted] = tools.try_emplace(s.key.tool);
        ToolDoc& tool = it->second;
        if (inserted) {
            tool.tool_name = s.key.tool;
            tool.tool_description = "Simulated tool " + s.key.tool;
            tool.host_url = "https://sim.internal/" + s.key.tool;
            auto cat = categories.find(s.key.tool);
            tool.category = cat != categories.end() ? cat->second : "Simulated";
            tool_order.push_back(s.key.tool);
        }
        ApiDoc api;
        api.name = s.key.api;
        api.description = "Simulated endpoint " + s.key.api + " of " + s.key.tool;
        api.url = "https://sim.internal/" + s.key.tool + "/" + s.key.api;
        api.http_method = HttpMethod::GET;
        api.optional_parameters = s.params;
        ApiCallResult example = executor->call(s.key, json::object());
        api.example_response = example.body;
        tool.api_list.push_back(std::move(api));
    }
    for (const auto& [coll, members] : collections) {
        for (const auto& name : members) {
            auto it = tools.find(name);
            if (it != tools.end()) it->second.collections.insert(coll);
        }
    }
    std::vector<ToolDoc> ordered;
    ordered.reserve(tool_order.size());
    for (const auto& name : tool_order) ordered.push_back(tools.at(name));
    return {make_hub(std::move(ordered)), executor};
}

// --- script trees ---

namespace {

json script_node_to_json(const ScriptNode& n) {
    json j;
    j["action"] = action_to_json(n.action);
    j["children"] = json::array();
    for (const auto& c : n.children) j["children"].push_back(script_node_to_json(c));
    return j;
}

ScriptNode script_node_from_json(const json& j) {
    ScriptNode n;
    n.action = action_from_json(j.at("action"));
    if (j.contains("children"))
        for (const auto& c : j["children"]) n.children.push_back(script_node_from_json(c));
    return n;
}

void validate_nodes(const std::vector<ScriptNode>& siblings, int max_children) {
    if (max_children > 0 && static_cast<int>(siblings.size()) > max_children)
        throw Error("script branching exceeds max_children");
    for (std::size_t i = 0; i < siblings.size(); ++i) {
        for (std::size_t k = i + 1; k < siblings.size(); ++k) {
            if (siblings[i].action == siblings[k].action)
                throw Error("script siblings must carry distinct actions");
        }
    }
    for (const auto& n : siblings) {
        if (n.action.kind == ActionKind::Finish) {
            if (!n.children.empty()) throw Error("Finish script nodes must be leaves");
        } else if (n.children.empty()) {
            throw Error("script leaves must be Finish actions");
        } else {
            validate_nodes(n.children, max_children);
        }
    }
}

}  // namespace

json ScriptTree::to_json() const {
    json j;
    j["roots"] = json::array();
    for (const auto& r : roots) j["roots"].push_back(script_node_to_json(r));
    return j;
}

ScriptTree ScriptTree::from_json(const json& j) {
    ScriptTree t;
    for (const auto& r : j.at("roots")) t.roots.push_back(script_node_from_json(r));
    return t;
}

void ScriptTree::validate(int max_children) const { validate_nodes(roots, max_children); }

std::string ScriptedPolicy::decide(const PolicyQuery& query) {
    const std::vector<ScriptNode>* siblings = &tree_.roots;
    if (query.history) {
        for (const auto& step : *query.history) {
            const ScriptNode* matched = nullptr;
            for (const auto& cand : *siblings) {
                if (cand.action == step.action) {
                    matched = &cand;
                    break;
                }
            }
            if (!matched) {
                exhausted_flagged_ = true;
                return action_to_json(Action::finish_give_up("no scripted action for this state")).dump();
            }
            siblings = &matched->children;
        }
    }

    std::size_t index = query.prior_siblings.size();
    if (trial_seed_ && !siblings->empty()) {
        const std::size_t depth = query.history ? query.history->size() : 0;
        index = (index + Rng::mix(*trial_seed_, depth)) % siblings->size();
    }
    if (index >= siblings->size()) {
        exhausted_flagged_ = true;
        return action_to_json(Action::finish_give_up("no scripted action for this state")).dump();
    }
    return action_to_json((*siblings)[index].action).dump();
}

std::unique_ptr<Policy> scripted_policy(ScriptTree tree) {
    return std::make_unique<ScriptedPolicy>(std::move(tree));
}

OracleResult oracle_search(const ScriptTree& tree, int budget, int max_children, int max_depth) {
    struct Enumerator {
        int budget;
        int max_children;
        int max_depth;
        int spent = 0;
        bool found = false;

        bool expand(const std::vector<ScriptNode>& children, int depth) {
            for (int slot = 0; slot < max_children; ++slot) {
                if (spent >= budget) return false;
                ++spent;  // generating this child (scripted or off-script) is one call
                if (slot < static_cast<int>(children.size())) {
                    const ScriptNode& child = children[slot];
                    if (child.action.kind == ActionKind::Finish) {
                        if (child.action.return_type == ReturnType::give_answer) {
                            found = true;
                            return true;
                        }
                        continue;  // give-up leaf
                    }
                    if (depth + 1 >= max_depth) continue;  // depth cap: dead end
                    if (expand(child.children, depth + 1)) return true;
                }
                // off-script slot: the policy falls back to give-up
            }
            return false;
        }
    };

    Enumerator e{budget, max_children, max_depth};
    e.expand(tree.roots, 0);
    OracleResult r;
    r.answers = e.found;
    if (e.found) r.cost_to_answer = e.spent;
    return r;
}

namespace {

ScriptNode random_node(Rng& rng, int depth, int max_depth, int max_branch,
                       const std::vector<std::string>& api_names, int& serial) {
    const bool must_finish = depth >= max_depth;
    const double leaf_p = 0.25 + 0.15 * depth;
    if (must_finish || rng.chance(leaf_p)) {
        ScriptNode leaf;
        if (rng.chance(0.3)) {
            leaf.action = Action::finish_answer("answer " + std::to_string(serial),
                                                "final answer #" + std::to_string(serial));
        } else {
            leaf.action = Action::finish_give_up("give up " + std::to_string(serial));
        }
        ++serial;
        return leaf;
    }
    ScriptNode node;
    node.action = Action::api_call("try option " + std::to_string(serial),
                                   api_names[rng.index(api_names.size())],
                                   json{{"n", serial}});
    ++serial;
    const int n_children = rng.range(1, max_branch);
    for (int i = 0; i < n_children; ++i)
        node.children.push_back(random_node(rng, depth + 1, max_depth, max_branch, api_names, serial));
    return node;
}

}  // namespace

ScriptTree random_script_tree(Rng& rng, int max_depth, int max_branch,
                              const std::vector<std::string>& api_names) {
    ScriptTree tree;
    int serial = 0;
    const int n_roots = rng.range(1, max_branch);
    for (int i = 0; i < n_roots; ++i)
        tree.roots.push_back(random_node(rng, 1, max_depth, max_branch, api_names, serial));
    tree.validate(max_branch);
    return tree;
}

std::vector<TrapTask> generate_trap_suite(std::uint64_t seed, int count, int budget,
                                          int max_children, int max_depth) {
    std::vector<TrapTask> suite;
    suite.reserve(static_cast<std::size_t>(count));
    const std::vector<std::string> api_names = {"lookup", "fetch", "verify", "probe"};

    for (int i = 0; i < count; ++i) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(i)));
        TrapTask task;
        const std::string tool = "simtool_" + std::to_string(i);
        task.instruction = "Trap task " + std::to_string(i) + ": retrieve the verified record.";

        std::vector<SimApiSpec> specs;
        for (const auto& name : api_names) {
            SimApiSpec s;
            s.key = {tool, name};
            specs.push_back(std::move(s));
        }
        auto [hub, executor] = build_sim_hub(specs, {{tool, "Simulated"}});
        (void)executor;
        for (const auto& t : hub.tools)
            for (const auto& a : t.api_list) task.apis.push_back({{t.tool_name, a.name}, a});

        const std::string marker = "ANSWER[" + std::to_string(i) + "]";
        int serial = 0;
        auto trap_branch = [&](int length) {
            ScriptNode head = ScriptNode{Action::api_call("trap " + std::to_string(serial),
                                                          api_names[rng.index(api_names.size())],
                                                          json{{"n", serial}}),
                                         {}};
            ++serial;
            ScriptNode* tail = &head;
            for (int d = 1; d < length; ++d) {
                tail->children.push_back(
                    ScriptNode{Action::api_call("trap " + std::to_string(serial),
                                                api_names[rng.index(api_names.size())],
                                                json{{"n", serial}}),
                               {}});
                ++serial;
                tail = &tail->children.back();
            }
            tail->children.push_back(
                ScriptNode{Action::finish_give_up("dead end " + std::to_string(serial)), {}});
            ++serial;
            return head;
        };
        auto answer_branch = [&]() {
            ScriptNode head = ScriptNode{Action::api_call("promising " + std::to_string(serial),
                                                          api_names[rng.index(api_names.size())],
                                                          json{{"n", serial}}),
                                         {}};
            ++serial;
            head.children.push_back(ScriptNode{
                Action::finish_answer("found it", marker + ": record confirmed"), {}});
            ++serial;
            return head;
        };

        // two thirds answer on the second branch, the rest on the third
        const int answer_index = (i % 3 == 2) ? 2 : 1;
        for (int b = 0; b < answer_index; ++b)
            task.script.roots.push_back(trap_branch(rng.range(1, 2)));
        task.script.roots.push_back(answer_branch());
        task.script.validate(max_children);

        const OracleResult check = oracle_search(task.script, budget, max_children, max_depth);
        if (!check.answers)
            throw Error("trap suite construction produced an unreachable answer");

        task.meta.solvable = true;
        task.meta.milestones.push_back(
            {"answer_confirmed", MilestoneKind::AnswerContains, json(marker)});
        for (const auto& e : task.apis) task.truth.available.push_back(e.key);
        for (const auto& name : api_names) task.truth.useful_apis.insert(name);
        task.truth.answer_marker = marker;
        suite.push_back(std::move(task));
    }
    return suite;
}

json trap_task_to_json(const TrapTask& task, const std::string& id) {
    json j;
    j["id"] = id;
    j["scenario"] = "I1";
    j["instruction"] = task.instruction;
    j["script"] = task.script.to_json();
    j["specs"] = json::array();
    for (const auto& e : task.apis) {
        SimApiSpec s;
        s.key = e.key;
        j["specs"].push_back(s.to_json());
    }
    j["solvable"] = task.meta.solvable;
    j["milestones"] = json::array();
    for (const auto& m : task.meta.milestones) j["milestones"].push_back(m.to_json());
    j["useful_apis"] = json::array();
    for (const auto& u : task.truth.useful_apis) j["useful_apis"].push_back(u);
    j["answer_marker"] = task.truth.answer_marker;
    return j;
}

TrapTask trap_task_from_json(const json& j) {
    TrapTask task;
    task.instruction = j.at("instruction").get<std::string>();
    task.script = ScriptTree::from_json(j.at("script"));
    std::vector<SimApiSpec> specs;
    for (const auto& sj : j.at("specs")) specs.push_back(SimApiSpec::from_json(sj));
    auto [hub, executor] = build_sim_hub(specs, {});
    (void)executor;
    for (const auto& t : hub.tools)
        for (const auto& a : t.api_list) task.apis.push_back({{t.tool_name, a.name}, a});
    task.meta.solvable = j.value("solvable", true);
    if (j.contains("milestones"))
        for (const auto& mj : j["milestones"]) task.meta.milestones.push_back(Milestone::from_json(mj));
    for (const auto& e : task.apis) task.truth.available.push_back(e.key);
    if (j.contains("useful_apis"))
        for (const auto& u : j["useful_apis"]) task.truth.useful_apis.insert(u.get<std::string>());
    task.truth.answer_marker = j.value("answer_marker", "");
    return task;
}

std::vector<SimApiSpec> demo_sim_specs(std::uint64_t seed) {
    Rng rng(Rng::mix(seed, 0xd37a));
    std::vector<SimApiSpec> specs;
    const std::vector<std::pair<std::string, std::vector<std::string>>> layout = {
        {"weather_watch", {"current_weather", "hourly_forecast", "rain_history"}},
        {"climate_news", {"latest_articles", "search_topic", "top_headline"}},
        {"geo_locator", {"coordinates_of", "nearest_city", "timezone_at"}},
        {"market_feed", {"ticker_price", "daily_change", "sector_summary"}},
        {"fx_exchange", {"convert_amount", "rate_history", "supported_currencies"}},
        {"news_digest", {"business_brief", "tech_brief"}},
        {"fun_facts", {"random_fact", "fact_of_the_day", "search_facts"}},
        {"word_tools", {"define_word", "synonyms_of", "random_words"}},
        {"event_planner", {"list_venues", "book_slot"}},
    };
    // a few deliberately broken endpoints so hub filtering has work to do
    const std::vector<std::pair<std::string, SimFailure>> broken = {
        {"weather_watch/legacy_lookup", SimFailure::Http404},
        {"climate_news/old_portal", SimFailure::HtmlPage},
        {"market_feed/flaky_quote", SimFailure::ErrorBody},
        {"fun_facts/slow_mirror", SimFailure::None},  // healthy but slow
    };
    for (const auto& [tool, apis] : layout) {
        for (const auto& api : apis) {
            SimApiSpec s;
            s.key = {tool, api};
            s.latency_ms = 20.0 + static_cast<double>(rng.index(80));
            s.response_tokens = 8 + static_cast<int>(rng.index(24));
            specs.push_back(std::move(s));
        }
    }
    for (const auto& [path, mode] : broken) {
        const auto slash = path.find('/');
        SimApiSpec s;
        s.key = {path.substr(0, slash), path.substr(slash + 1)};
        s.failure_mode = mode;
        s.latency_ms = mode == SimFailure::None ? 9000.0 : 30.0;
        specs.push_back(std::move(s));
    }
    return specs;
}

std::map<std::string, std::string> demo_sim_categories() {
    return {
        {"weather_watch", "Weather"}, {"climate_news", "News"},   {"geo_locator", "Weather"},
        {"market_feed", "Finance"},   {"fx_exchange", "Finance"}, {"news_digest", "News"},
        {"fun_facts", "Entertainment"}, {"word_tools", "Entertainment"},
        {"event_planner", "Entertainment"},
    };
}

std::map<std::string, std::vector<std::string>> demo_sim_collections() {
    return {
        {"daily briefing", {"climate_news", "news_digest", "market_feed"}},
        {"trip planning", {"weather_watch", "geo_locator", "fx_exchange", "event_planner"}},
        {"word games", {"word_tools", "fun_facts"}},
    };
}

std::string SimAgentPolicy::decide(const PolicyQuery& query) {
    const std::size_t done = query.history ? query.history->size() : 0;
    if (done < plan_.size()) {
        const ApiKey& key = plan_[done];
        return action_to_json(Action::api_call("call " + key.str(), key.api,
                                               json{{"query", "auto"}}))
            .dump();
    }
    std::string digest = answer_prefix_;
    if (query.history) {
        for (const auto& s : *query.history) {
            if (!s.observation.empty()) {
                digest += s.observation;
                digest += " | ";
            }
        }
    }
    return action_to_json(Action::finish_answer("collected everything", digest)).dump();
}

}  // namespace toolforge
