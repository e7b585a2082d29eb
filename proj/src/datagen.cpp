#include "toolforge/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "toolforge/prompts.hpp"
#include "toolforge/rng.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::react: return "react";
        case StrategyKind::react_at_n: return "react@n";
        case StrategyKind::dfsdt: return "dfsdt";
    }
    return "dfsdt";
}

StrategyKind strategy_from_string(const std::string& s) {
    if (s == "react") return StrategyKind::react;
    if (s == "react@n" || s == "react_at_n") return StrategyKind::react_at_n;
    if (s == "dfsdt") return StrategyKind::dfsdt;
    throw BadEnum("strategy", s);
}

namespace {

std::vector<ApiKey> tool_api_keys(const ToolDoc& tool) {
    std::vector<ApiKey> keys;
    for (const auto& a : tool.api_list) keys.push_back({tool.tool_name, a.name});
    return keys;
}

std::vector<ApiKey> pick_tool_apis(const ToolDoc& tool, Rng& rng) {
    const int available = static_cast<int>(tool.api_list.size());
    const int want = rng.range(1, std::min(3, available));
    std::vector<std::size_t> indices(tool.api_list.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::vector<std::size_t> chosen = rng.sample(indices, static_cast<std::size_t>(want));
    std::sort(chosen.begin(), chosen.end());  // keep document order within the tool
    std::vector<ApiKey> keys;
    for (std::size_t i : chosen) keys.push_back({tool.tool_name, tool.api_list[i].name});
    return keys;
}

}  // namespace

std::vector<ApiKey> sample_api_subset(const Hub& hub, Scenario scenario, std::uint64_t seed,
                                      std::size_t single_tool_cap) {
    Rng rng(seed);
    if (hub.tools.empty()) throw EmptyHub();

    if (scenario == Scenario::I1_single_tool) {
        const ToolDoc& tool = hub.tools[rng.index(hub.tools.size())];
        std::vector<ApiKey> keys = tool_api_keys(tool);
        if (keys.size() > single_tool_cap) keys.resize(single_tool_cap);
        return keys;
    }

    // group eligibility: a category/collection usable for multi-tool sampling
    // needs at least two member tools
    std::vector<std::pair<std::string, std::vector<const ToolDoc*>>> groups;
    if (scenario == Scenario::I2_intra_category) {
        for (const auto& cat : hub.categories) {
            std::vector<const ToolDoc*> members;
            for (const auto& t : hub.tools)
                if (t.category == cat) members.push_back(&t);
            if (members.size() >= 2) groups.emplace_back(cat, std::move(members));
        }
        if (groups.empty()) throw InsufficientTools("no category holds at least 2 tools");
    } else {
        for (const auto& [coll, names] : hub.collections) {
            std::vector<const ToolDoc*> members;
            for (const auto& name : names) {
                const ToolDoc* t = hub.find_tool(name);
                if (t) members.push_back(t);
            }
            if (members.size() >= 2) groups.emplace_back(coll, std::move(members));
        }
        if (groups.empty()) throw InsufficientTools("no collection holds at least 2 tools");
    }

    const auto& [group_name, members] = groups[rng.index(groups.size())];
    (void)group_name;
    const int n_tools = rng.range(2, static_cast<int>(std::min<std::size_t>(5, members.size())));
    std::vector<const ToolDoc*> chosen = rng.sample(members, static_cast<std::size_t>(n_tools));

    std::vector<ApiKey> subset;
    for (const ToolDoc* tool : chosen) {
        for (auto& key : pick_tool_apis(*tool, rng)) subset.push_back(std::move(key));
    }
    return subset;
}

std::vector<SeedExample> select_seeds(const std::vector<SeedExample>& pool, Scenario scenario,
                                      std::uint64_t seed) {
    const SeedClass want =
        scenario == Scenario::I1_single_tool ? SeedClass::single_tool : SeedClass::multi_tool;
    std::vector<SeedExample> eligible;
    for (const auto& s : pool)
        if (s.scenario_class == want) eligible.push_back(s);
    if (eligible.size() < 3) throw PoolTooSmall(eligible.size(), 3);
    Rng rng(seed);
    return rng.sample(eligible, 3);
}

std::string build_generation_prompt(const GenerationRequest& request) {
    const std::string_view description = request.scenario == Scenario::I1_single_tool
                                             ? prompts::kSingleToolTaskDescription
                                             : prompts::kMultiToolTaskDescription;
    std::string prompt =
        substitute(std::string(description), "count", std::to_string(request.count));
    prompt += "\n\nAPI documentation:\n";
    for (const auto& key : request.subset) {
        const ToolDoc* tool = request.hub ? request.hub->find_tool(key.tool) : nullptr;
        const ApiDoc* api = request.hub ? request.hub->find_api(key) : nullptr;
        json doc;
        doc["tool_name"] = key.tool;
        if (tool) doc["tool_description"] = tool->tool_description;
        doc["name"] = key.api;
        if (api) {
            doc["description"] = api->description;
            doc["method"] = to_string(api->http_method);
            json req = json::array();
            for (const auto& p : api->required_parameters)
                req.push_back({{"name", p.name}, {"type", to_string(p.type)}});
            doc["required_parameters"] = req;
        }
        prompt += doc.dump() + "\n";
    }
    prompt += "\nIn-context examples:\n";
    for (std::size_t i = 0; i < request.seeds.size(); ++i)
        prompt += "Example " + std::to_string(i + 1) + ": " + request.seeds[i].text + "\n";
    return prompt;
}

std::string TemplateInstructionGenerator::generate(const GenerationRequest& request) {
    Rng rng(Rng::mix(request.seed, 0x7e6f));
    const auto& subset = request.subset;
    std::string out = "[";

    std::set<std::string> tools_in_subset;
    for (const auto& k : subset) tools_in_subset.insert(k.tool);

    for (int q = 0; q < request.count; ++q) {
        // pick 2-4 related APIs; multi-tool scenarios must span 2+ tools
        std::vector<ApiKey> related;
        const std::size_t want = std::min<std::size_t>(
            subset.size(), static_cast<std::size_t>(rng.range(2, 4)));
        std::vector<ApiKey> pool = subset;
        related = rng.sample(pool, std::max<std::size_t>(want, 1));
        if (is_multi_tool(request.scenario) && tools_in_subset.size() >= 2) {
            std::set<std::string> covered;
            for (const auto& k : related) covered.insert(k.tool);
            if (covered.size() < 2) {
                for (const auto& k : subset) {
                    if (!covered.count(k.tool)) {
                        related.push_back(k);
                        break;
                    }
                }
            }
        }

        std::string query = "Please use ";
        for (std::size_t i = 0; i < related.size(); ++i) {
            if (i) query += i + 1 == related.size() ? " and then " : " plus ";
            query += related[i].api + " from " + related[i].tool;
        }
        query += " to finish request #" + std::to_string(q) + " for me";

        if (q) out += ",";
        out += "{Query" + std::to_string(q + 1) + ": " + query + ", 'related_apis':[";
        for (std::size_t i = 0; i < related.size(); ++i) {
            if (i) out += ", ";
            if (request.scenario == Scenario::I1_single_tool)
                out += "'" + related[i].api + "'";
            else
                out += "['" + related[i].tool + "', '" + related[i].api + "']";
        }
        out += "]}";
    }
    out += "]";
    return out;
}

namespace {

// top-level {...} blocks of a bracketed listing, quote-aware
std::vector<std::string> split_brace_blocks(const std::string& text) {
    std::vector<std::string> blocks;
    int depth = 0;
    bool in_single = false, in_double = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\'' && !in_double) in_single = !in_single;
        if (c == '"' && !in_single) in_double = !in_double;
        if (in_single || in_double) continue;
        if (c == '{') {
            if (depth == 0) start = i;
            ++depth;
        } else if (c == '}') {
            --depth;
            if (depth == 0) blocks.push_back(text.substr(start, i - start + 1));
            if (depth < 0) throw GeneratorOutputUnparseable("unbalanced braces");
        }
    }
    if (depth != 0) throw GeneratorOutputUnparseable("unbalanced braces");
    return blocks;
}

std::optional<InstructionPair> parse_quasi_block(const std::string& block,
                                                 const GenerationRequest& request) {
    std::size_t rel = block.find("'related_apis'");
    if (rel == std::string::npos) rel = block.find("\"related_apis\"");
    if (rel == std::string::npos) return std::nullopt;

    // query text sits between the first ':' and the comma before related_apis
    const std::size_t colon = block.find(':');
    if (colon == std::string::npos || colon > rel) return std::nullopt;
    std::size_t query_end = block.rfind(',', rel);
    if (query_end == std::string::npos || query_end < colon) return std::nullopt;
    std::string query = trim(block.substr(colon + 1, query_end - colon - 1));
    if (!query.empty() && (query.front() == '"' || query.front() == '\'') &&
        query.back() == query.front() && query.size() >= 2)
        query = query.substr(1, query.size() - 2);
    if (query.empty()) return std::nullopt;

    const std::size_t list_open = block.find('[', rel);
    if (list_open == std::string::npos) return std::nullopt;
    int depth = 0;
    std::size_t list_close = std::string::npos;
    for (std::size_t i = list_open; i < block.size(); ++i) {
        if (block[i] == '[') ++depth;
        if (block[i] == ']' && --depth == 0) {
            list_close = i;
            break;
        }
    }
    if (list_close == std::string::npos) return std::nullopt;
    std::string list_text = block.substr(list_open, list_close - list_open + 1);
    std::replace(list_text.begin(), list_text.end(), '\'', '"');
    json list = json::parse(list_text, nullptr, false);
    if (list.is_discarded() || !list.is_array()) return std::nullopt;

    InstructionPair pair;
    pair.query = query;
    for (const auto& item : list) {
        if (item.is_string()) {
            // single-tool form: bare api names, tool resolved from the subset
            const std::string api = item.get<std::string>();
            std::string tool;
            for (const auto& k : request.subset) {
                if (k.api == api) {
                    tool = k.tool;
                    break;
                }
            }
            pair.related_apis.push_back({tool, api});
        } else if (item.is_array() && item.size() == 2) {
            pair.related_apis.push_back(ApiKey::from_json(item));
        }
    }
    if (pair.related_apis.empty()) return std::nullopt;
    return pair;
}

}  // namespace

std::vector<InstructionPair> parse_generated_instructions(const std::string& text,
                                                          const GenerationRequest& request) {
    const std::string body = trim(text);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw GeneratorOutputUnparseable("expected a bracketed listing");

    std::vector<InstructionPair> pairs;

    json strict = json::parse(body, nullptr, false);
    if (!strict.is_discarded() && strict.is_array()) {
        for (const auto& entry : strict) {
            if (!entry.is_object()) continue;
            InstructionPair pair;
            for (auto it = entry.begin(); it != entry.end(); ++it) {
                if (it.key().rfind("Query", 0) == 0 || it.key() == "query")
                    pair.query = it.value().get<std::string>();
            }
            if (pair.query.empty() || !entry.contains("related_apis")) continue;
            for (const auto& item : entry["related_apis"]) {
                if (item.is_string()) {
                    const std::string api = item.get<std::string>();
                    std::string tool;
                    for (const auto& k : request.subset)
                        if (k.api == api) {
                            tool = k.tool;
                            break;
                        }
                    pair.related_apis.push_back({tool, api});
                } else if (item.is_array() && item.size() == 2) {
                    pair.related_apis.push_back(ApiKey::from_json(item));
                }
            }
            if (!pair.related_apis.empty()) pairs.push_back(std::move(pair));
        }
    } else {
        for (const auto& block : split_brace_blocks(body)) {
            auto pair = parse_quasi_block(block, request);
            if (pair) pairs.push_back(std::move(*pair));
        }
    }

    for (auto& p : pairs) {
        p.scenario = request.scenario;
        p.subset = request.subset;
    }
    return pairs;
}

namespace {

std::string normalized_query(const std::string& q) {
    std::string out;
    for (const auto& tok : whitespace_tokens(q)) {
        if (!out.empty()) out += ' ';
        out += tok;
    }
    return out;
}

}  // namespace

std::vector<InstructionPair> generate_instructions(const GenerationRequest& request,
                                                   InstructionGenerator& generator) {
    if (request.subset.empty()) throw Error("api subset is empty");
    const std::string raw = generator.generate(request);
    std::vector<InstructionPair> pairs = parse_generated_instructions(raw, request);

    std::set<std::string> seen;
    std::vector<InstructionPair> unique;
    for (auto& p : pairs) {
        if (seen.insert(normalized_query(p.query)).second) unique.push_back(std::move(p));
    }
    return unique;
}

std::vector<InstructionPair> filter_hallucinated(const std::vector<InstructionPair>& pairs) {
    std::vector<InstructionPair> kept;
    for (const auto& p : pairs) {
        const std::set<ApiKey> subset(p.subset.begin(), p.subset.end());
        bool ok = !p.related_apis.empty();
        std::set<std::string> tools;
        for (const auto& k : p.related_apis) {
            if (!subset.count(k)) {
                ok = false;
                break;
            }
            tools.insert(k.tool);
        }
        if (ok && is_multi_tool(p.scenario) && tools.size() < 2) ok = false;
        if (ok) kept.push_back(p);
    }
    return kept;
}

namespace {

struct PairOutcome {
    SolutionPath path;
    PassLabelValue label = PassLabelValue::Fail;
    EpisodeOutcome outcome = EpisodeOutcome::GaveUp;
    int policy_calls = 0;
    std::uint64_t seed = 0;
};

}  // namespace

AnnotateResult annotate_dataset(const std::vector<InstructionPair>& pairs,
                                const AnnotateConfig& config,
                                const EpisodePolicyFactory& make_policy, ApiExecutor& executor,
                                const JudgeFactory& make_judge, const Hub& hub) {
    if (config.strategy == StrategyKind::react_at_n)
        throw Error("annotation runs react or dfsdt; react@n is a benchmark baseline");

    std::vector<PairOutcome> outcomes(pairs.size());
    std::vector<std::exception_ptr> failures(pairs.size());

    auto run_one = [&](std::size_t i) {
        const InstructionPair& pair = pairs[i];
        std::vector<ApiEntry> apis;
        for (const auto& key : pair.subset) {
            const ApiDoc* doc = hub.find_api(key);
            if (!doc) throw UnknownApiKey(key.tool, key.api);
            apis.push_back({key, *doc});
        }
        const std::uint64_t seed = Rng::mix(config.base_seed, i);
        auto policy = make_policy(pair, seed);
        Episode ep;
        if (config.strategy == StrategyKind::react)
            ep = run_react(pair.query, apis, *policy, executor, config.limits.budget);
        else
            ep = run_dfsdt(pair.query, apis, *policy, executor, config.limits);

        auto [judge, meta] = make_judge(pair);
        const PathFacts facts = judge->judge(ep.path, meta);
        const PassLabel label = judge_pass_rules(facts, meta);
        ep.path.pass_label = label.value;

        outcomes[i] = {std::move(ep.path), label.value, ep.outcome, ep.policy_calls, seed};
    };

    const int jobs = executor.concurrent_safe() ? std::max(1, config.jobs) : 1;
    if (jobs <= 1 || pairs.size() <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= pairs.size()) break;
                try {
                    run_one(i);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    AnnotateResult result;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const PairOutcome& o = outcomes[i];
        json log;
        log["index"] = i;
        log["query"] = pairs[i].query;
        log["seed"] = o.seed;
        log["outcome"] = to_string(o.outcome);
        log["policy_calls"] = o.policy_calls;
        log["label"] = to_string(o.label);
        log["retained"] = o.label == PassLabelValue::Pass;
        result.run_log.push_back(std::move(log));
        if (o.label == PassLabelValue::Pass) result.retained.push_back(outcomes[i].path);
    }
    return result;
}

}  // namespace toolforge
