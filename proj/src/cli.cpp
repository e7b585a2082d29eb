#include "toolforge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "toolforge/datagen.hpp"
#include "toolforge/http_provider.hpp"
#include "toolforge/hub_io.hpp"
#include "toolforge/retrieval.hpp"
#include "toolforge/simenv.hpp"
#include "toolforge/text.hpp"

namespace toolforge::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- providers

struct ProviderProfile {
    std::string kind = "sim";  // sim | external
    std::string chat_endpoint;
    std::string model;
    json raw = json::object();
};

ProviderProfile load_profile(const std::string& config_path) {
    ProviderProfile p;
    if (config_path.empty()) return p;
    json cfg = json::parse(read_text_file(config_path), nullptr, false);
    if (cfg.is_discarded()) throw ConfigError("config: not valid JSON: " + config_path);
    p.raw = cfg;
    if (cfg.contains("provider")) {
        const json& prov = cfg["provider"];
        p.kind = prov.value("kind", "sim");
        p.chat_endpoint = prov.value("chat_endpoint", "");
        p.model = prov.value("model", "");
    }
    if (p.kind != "sim" && p.kind != "external")
        throw ConfigError("config: provider kind must be sim or external");
    return p;
}

std::string config_hash(const json& j) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
    return out.str();
}

// every output-producing command drops a manifest so a run can be replayed
void write_run_manifest(const std::filesystem::path& out, bool out_is_dir,
                        const std::string& command, const json& extra, std::uint64_t seed,
                        const json& profile_raw) {
    json m;
    m["command"] = command;
    m["seed"] = seed;
    m["config_hash"] = config_hash(profile_raw);
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    const std::filesystem::path target =
        out_is_dir ? out / "manifest.json" : std::filesystem::path(out.string() + ".manifest.json");
    write_text_file(target, m.dump(2) + "\n");
}

// -------------------------------------------------------------------- hub

struct HubBundle {
    Hub hub;
    std::shared_ptr<ApiExecutor> executor;
    std::vector<SimApiSpec> specs;  // sim mode only
};

std::vector<SimApiSpec> load_sim_specs(const fs::path& file) {
    std::vector<SimApiSpec> specs;
    for (const auto& j : read_jsonl(file)) specs.push_back(SimApiSpec::from_json(j));
    return specs;
}

void save_sim_specs(const fs::path& file, const std::vector<SimApiSpec>& specs) {
    std::vector<json> records;
    records.reserve(specs.size());
    for (const auto& s : specs) records.push_back(s.to_json());
    write_jsonl(file, records);
}

fs::path resolve_hub_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    const fs::path env = hub_dir_from_env();
    if (!env.empty()) return env;
    throw ConfigError("hub: no --hub flag and TOOLFORGE_HUB_DIR is unset");
}

HubBundle load_bundle(const std::string& hub_flag, const std::string& sim_specs_flag,
                      const ProviderProfile& profile) {
    HubBundle b;
    const fs::path dir = resolve_hub_dir(hub_flag);
    b.hub = load_hub(dir);
    if (profile.kind == "sim") {
        fs::path specs_path = sim_specs_flag.empty() ? dir / "sim_specs.jsonl" : fs::path(sim_specs_flag);
        if (!fs::exists(specs_path))
            throw ConfigError("sim specs: not found at " + specs_path.string());
        b.specs = load_sim_specs(specs_path);
        b.executor = std::make_shared<SimExecutor>(b.specs);
    } else {
        std::map<ApiKey, ApiDoc> catalog;
        for (const auto& t : b.hub.tools)
            for (const auto& a : t.api_list) catalog[{t.tool_name, a.name}] = a;
        b.executor = std::make_shared<HttpApiExecutor>(std::move(catalog));
    }
    return b;
}

// ------------------------------------------------------------------ tables

void print_table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty()) return;
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
        }
        std::cout << line << "\n";
    }
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

// ------------------------------------------------------------------ tasks

struct TaskRecord {
    std::string id;
    std::string scenario = "I1";
    TrapTask task;
    std::vector<SimApiSpec> specs;
};

std::vector<TaskRecord> load_tasks(const fs::path& file) {
    std::vector<TaskRecord> out;
    std::size_t index = 0;
    for (const auto& j : read_jsonl(file)) {
        TaskRecord rec;
        rec.id = j.value("id", "task_" + std::to_string(index));
        rec.scenario = j.value("scenario", "I1");
        rec.task = trap_task_from_json(j);
        for (const auto& sj : j.at("specs")) rec.specs.push_back(SimApiSpec::from_json(sj));
        out.push_back(std::move(rec));
        ++index;
    }
    return out;
}

struct StrategyRunResult {
    EpisodeOutcome outcome = EpisodeOutcome::GaveUp;
    int policy_calls = 0;
    PassLabelValue label = PassLabelValue::Fail;
    SolutionPath path;
    std::optional<SearchTree> tree;
};

StrategyRunResult run_task(const TaskRecord& rec, StrategyKind kind, const SearchLimits& limits,
                           int cost_target, std::uint64_t seed) {
    SimExecutor executor(rec.specs);
    Episode ep;
    if (kind == StrategyKind::react) {
        ScriptedPolicy policy(rec.task.script);
        ep = run_react(rec.task.instruction, rec.task.apis, policy, executor, limits.budget);
    } else if (kind == StrategyKind::dfsdt) {
        ScriptedPolicy policy(rec.task.script);
        ep = run_dfsdt(rec.task.instruction, rec.task.apis, policy, executor, limits);
    } else {
        const std::uint64_t task_seed = Rng::mix(seed, fnv1a(rec.id));
        PolicyFactory factory = [&](int trial) {
            return std::make_unique<ScriptedPolicy>(
                rec.task.script, Rng::mix(task_seed, static_cast<std::uint64_t>(trial)));
        };
        ep = run_react_at_n(rec.task.instruction, rec.task.apis, factory, executor, cost_target,
                            limits.budget);
    }

    RuleBasedJudge judge(rec.task.truth);
    const PathFacts facts = judge.judge(ep.path, rec.task.meta);
    const PassLabel label = judge_pass_rules(facts, rec.task.meta);

    StrategyRunResult r;
    r.outcome = ep.outcome;
    r.policy_calls = ep.policy_calls;
    r.label = label.value;
    r.path = std::move(ep.path);
    r.path.pass_label = label.value;
    r.tree = std::move(ep.tree);
    return r;
}

// ------------------------------------------------------------ instruction gen

struct GenCounters {
    std::size_t raw = 0;
    std::size_t after_filter = 0;
    std::size_t emitted = 0;
};

std::vector<InstructionPair> generate_pairs(const Hub& hub, Scenario scenario, std::size_t count,
                                            std::uint64_t seed, int queries_per_call,
                                            GenCounters& counters) {
    TemplateInstructionGenerator generator;
    const auto pool = default_seed_pool();
    std::vector<InstructionPair> collected;
    std::set<std::string> seen;
    const std::size_t max_rounds = count * 4 + 8;
    for (std::size_t round = 0; round < max_rounds && collected.size() < count; ++round) {
        GenerationRequest req;
        req.hub = &hub;
        req.scenario = scenario;
        req.count = queries_per_call;
        req.seed = Rng::mix(seed, 0x9e00 + round);
        req.subset = sample_api_subset(hub, scenario, Rng::mix(seed, 2 * round));
        req.seeds = select_seeds(pool, scenario, Rng::mix(seed, 2 * round + 1));
        std::vector<InstructionPair> pairs = generate_instructions(req, generator);
        counters.raw += pairs.size();
        pairs = filter_hallucinated(pairs);
        counters.after_filter += pairs.size();
        for (auto& p : pairs) {
            if (collected.size() >= count) break;
            if (seen.insert(p.query).second) collected.push_back(std::move(p));
        }
    }
    counters.emitted = collected.size();
    return collected;
}

// -------------------------------------------------------------- annotation

TaskGroundTruth truth_for_pair(const InstructionPair& pair) {
    TaskGroundTruth truth;
    truth.available = pair.subset;
    for (const auto& k : pair.related_apis) truth.useful_apis.insert(k.api);
    if (!pair.related_apis.empty())
        truth.answer_marker = pair.related_apis.front().tool + "." + pair.related_apis.front().api;
    return truth;
}

TaskMeta meta_for_pair(const InstructionPair& pair) {
    TaskMeta meta;
    meta.solvable = true;
    std::size_t index = 0;
    for (const auto& k : pair.related_apis) {
        meta.milestones.push_back({"used_" + std::to_string(index), MilestoneKind::ObservationContains,
                                   json(k.tool + "." + k.api)});
        ++index;
    }
    return meta;
}

EpisodePolicyFactory make_policy_factory(const ProviderProfile& profile) {
    if (profile.kind == "sim") {
        return [](const InstructionPair& pair, std::uint64_t) {
            return std::make_unique<SimAgentPolicy>(pair.related_apis);
        };
    }
    if (profile.chat_endpoint.empty() || profile.model.empty())
        throw ConfigError("config: external provider needs chat_endpoint and model");
    if (!provider_key_from_env())
        throw ConfigError("config: external provider needs TOOLFORGE_PROVIDER_KEY");
    const std::string endpoint = profile.chat_endpoint;
    const std::string model = profile.model;
    return [endpoint, model](const InstructionPair&, std::uint64_t) {
        return std::make_unique<HttpChatPolicy>(endpoint, model);
    };
}

JudgeFactory make_judge_factory() {
    return [](const InstructionPair& pair) {
        return std::make_pair(std::unique_ptr<PathJudge>(new RuleBasedJudge(truth_for_pair(pair))),
                              meta_for_pair(pair));
    };
}

struct AnnotateStats {
    std::size_t pairs = 0;
    std::size_t retained = 0;
};

AnnotateStats annotate_to_files(const std::vector<InstructionPair>& pairs,
                                const AnnotateConfig& config, const ProviderProfile& profile,
                                ApiExecutor& executor, const Hub& hub, const fs::path& dataset_out,
                                const fs::path& log_out) {
    AnnotateResult result = annotate_dataset(pairs, config, make_policy_factory(profile), executor,
                                             make_judge_factory(), hub);
    std::vector<json> dataset;
    dataset.reserve(result.retained.size());
    for (const auto& p : result.retained) dataset.push_back(encode_path(p));
    write_jsonl(dataset_out, dataset);
    if (!log_out.empty()) {
        std::vector<json> log(result.run_log.begin(), result.run_log.end());
        write_jsonl(log_out, log);
    }
    return {pairs.size(), result.retained.size()};
}

// ------------------------------------------------------------------ judging

struct EvalTask {
    TaskMeta meta;
    TaskGroundTruth truth;
};

std::map<std::string, EvalTask> load_eval_tasks(const fs::path& file) {
    std::map<std::string, EvalTask> out;
    std::size_t index = 0;
    for (const auto& j : read_jsonl(file)) {
        EvalTask t;
        t.meta.solvable = j.value("solvable", true);
        if (j.contains("milestones"))
            for (const auto& mj : j["milestones"]) t.meta.milestones.push_back(Milestone::from_json(mj));
        if (j.contains("available"))
            for (const auto& k : j["available"]) t.truth.available.push_back(ApiKey::from_json(k));
        if (j.contains("specs"))  // task-suite records carry specs instead
            for (const auto& sj : j["specs"])
                t.truth.available.push_back(SimApiSpec::from_json(sj).key);
        if (j.contains("useful_apis"))
            for (const auto& u : j["useful_apis"]) t.truth.useful_apis.insert(u.get<std::string>());
        t.truth.answer_marker = j.value("answer_marker", "");
        out[j.value("id", "task_" + std::to_string(index))] = std::move(t);
        ++index;
    }
    return out;
}

struct JudgedRecord {
    std::string id;
    std::vector<PassLabel> votes;
    PassLabel final;
    PathFacts facts;
    SolutionPath path;
};

std::vector<JudgedRecord> judge_paths_file(const fs::path& paths_file,
                                           const std::map<std::string, EvalTask>& tasks,
                                           int votes) {
    std::vector<JudgedRecord> out;
    std::size_t index = 0;
    for (const auto& j : read_jsonl(paths_file)) {
        JudgedRecord rec;
        rec.id = j.value("id", "task_" + std::to_string(index));
        rec.path = decode_path(j);
        auto task_it = tasks.find(rec.id);
        if (task_it == tasks.end())
            throw ConfigError("eval: no task entry for path id " + rec.id);
        RuleBasedJudge judge(task_it->second.truth);
        for (int v = 0; v < votes; ++v) {
            const PathFacts facts = judge.judge(rec.path, task_it->second.meta);
            rec.facts = facts;
            rec.votes.push_back(judge_pass_rules(facts, task_it->second.meta));
        }
        rec.final = aggregate_votes(rec.votes);
        out.push_back(std::move(rec));
        ++index;
    }
    return out;
}

// ------------------------------------------------------------------- args

struct Args {
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string config;

    std::string hub;
    std::string sim_specs;
    std::string out;
    std::string pairs;
    std::string suite;
    std::string paths_a;
    std::string paths_b;
    std::string tasks;
    std::string scenario = "I1";
    std::string strategy = "dfsdt";
    std::vector<std::string> strategies;
    std::vector<std::string> scorers = {"bm25", "embedding"};
    std::string ks = "1,5";
    std::string split = "I1";
    std::size_t count = 20;
    int queries_per_call = 10;
    int budget = 30;
    int max_children = 3;
    int max_depth = 12;
    int votes = 4;
    int traps = 50;
    int negatives = 4;
    double latency_threshold_ms = 2000.0;
    std::string eval_mode;  // pass | win
    std::string log_file;
};

std::vector<std::size_t> parse_k_list(const std::string& ks) {
    std::vector<std::size_t> out;
    std::stringstream ss(ks);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(static_cast<std::size_t>(std::stoul(item)));
    }
    if (out.empty()) throw ConfigError("--k: empty cutoff list");
    return out;
}

// ------------------------------------------------------------ subcommands

int cmd_simenv_generate(const Args& a) {
    const fs::path out_dir = a.out.empty() ? fs::path("simenv_out") : fs::path(a.out);
    const auto specs = demo_sim_specs(a.seed);
    auto [hub, executor] = build_sim_hub(specs, demo_sim_categories(), demo_sim_collections());
    (void)executor;
    save_hub(hub, out_dir / "hub");
    save_sim_specs(out_dir / "hub" / "sim_specs.jsonl", specs);

    const auto suite =
        generate_trap_suite(a.seed, a.traps, a.budget, a.max_children, a.max_depth);
    std::vector<json> records;
    for (std::size_t i = 0; i < suite.size(); ++i) {
        std::ostringstream id;
        id << "trap_" << std::setw(4) << std::setfill('0') << i;
        records.push_back(trap_task_to_json(suite[i], id.str()));
    }
    write_jsonl(out_dir / "tasks.jsonl", records);
    write_run_manifest(out_dir, true, "simenv generate",
                       {{"traps", a.traps}, {"budget", a.budget}}, a.seed, json::object());

    print_table({{"hub tools", std::to_string(hub.tools.size())},
                 {"hub apis", std::to_string(hub.api_count())},
                 {"trap tasks", std::to_string(suite.size())},
                 {"output", out_dir.string()}});
    return 0;
}

int cmd_hub_filter(const Args& a) {
    const ProviderProfile profile = load_profile(a.config);
    HubBundle bundle = load_bundle(a.hub, a.sim_specs, profile);
    const auto reports = validate_hub(bundle.hub, *bundle.executor, a.latency_threshold_ms);
    const Hub filtered = filter_hub(bundle.hub, reports);

    const fs::path out_dir = a.out.empty() ? fs::path("hub_filtered") : fs::path(a.out);
    save_hub(filtered, out_dir);
    if (!bundle.specs.empty()) {
        std::vector<SimApiSpec> surviving;
        for (const auto& s : bundle.specs)
            if (filtered.find_api(s.key)) surviving.push_back(s);
        save_sim_specs(out_dir / "sim_specs.jsonl", surviving);
    }
    std::vector<json> report_records;
    for (const auto& [key, r] : reports) {
        json j;
        j["key"] = key.to_json();
        j["reachable"] = r.reachable;
        j["latency_ms"] = r.latency_ms;
        j["quality"] = to_string(r.quality);
        j["verdict"] = to_string(r.verdict);
        j["reason"] = r.reason;
        report_records.push_back(std::move(j));
    }
    write_jsonl(out_dir / "reports.jsonl", report_records);

    print_table({{"stage", "tools", "apis"},
                 {"input", std::to_string(bundle.hub.tools.size()),
                  std::to_string(bundle.hub.api_count())},
                 {"retained", std::to_string(filtered.tools.size()),
                  std::to_string(filtered.api_count())}});
    return 0;
}

int cmd_gen(const Args& a) {
    const ProviderProfile profile = load_profile(a.config);
    const Hub hub = load_hub(resolve_hub_dir(a.hub));
    const Scenario scenario = scenario_from_string(a.scenario);
    GenCounters counters;
    const auto pairs =
        generate_pairs(hub, scenario, a.count, a.seed, a.queries_per_call, counters);
    std::vector<json> records;
    records.reserve(pairs.size());
    for (const auto& p : pairs) records.push_back(p.to_json());
    const fs::path out = a.out.empty() ? fs::path("pairs.jsonl") : fs::path(a.out);
    write_jsonl(out, records);
    write_run_manifest(out, false, "gen",
                       {{"scenario", a.scenario}, {"count", a.count},
                        {"queries_per_call", a.queries_per_call}},
                       a.seed, profile.raw);
    print_table({{"stage", "count"},
                 {"generated", std::to_string(counters.raw)},
                 {"after hallucination filter", std::to_string(counters.after_filter)},
                 {"emitted (deduplicated)", std::to_string(counters.emitted)}});
    return 0;
}

int cmd_retrieve_export(const Args& a) {
    const Hub hub = load_hub(resolve_hub_dir(a.hub));
    if (a.pairs.empty()) throw ConfigError("retrieve export: --pairs is required");
    std::vector<InstructionPair> pairs;
    for (const auto& j : read_jsonl(a.pairs)) pairs.push_back(InstructionPair::from_json(j));
    const auto training = make_training_pairs(pairs, hub,
                                              static_cast<std::size_t>(a.negatives), a.seed);
    std::vector<json> records;
    records.reserve(training.size());
    for (const auto& t : training) records.push_back(t.to_json());
    const fs::path out = a.out.empty() ? fs::path("training_pairs.jsonl") : fs::path(a.out);
    write_jsonl(out, records);
    write_run_manifest(out, false, "retrieve export",
                       {{"negatives", a.negatives}, {"pairs", a.pairs}}, a.seed, json::object());
    print_table({{"instruction pairs", std::to_string(pairs.size())},
                 {"training pairs", std::to_string(training.size())},
                 {"negatives per query", std::to_string(a.negatives)},
                 {"output", out.string()}});
    return 0;
}

int cmd_annotate(const Args& a) {
    const ProviderProfile profile = load_profile(a.config);
    HubBundle bundle = load_bundle(a.hub, a.sim_specs, profile);
    if (a.pairs.empty()) throw ConfigError("annotate: --pairs is required");
    std::vector<InstructionPair> pairs;
    for (const auto& j : read_jsonl(a.pairs)) pairs.push_back(InstructionPair::from_json(j));

    AnnotateConfig config;
    config.strategy = strategy_from_string(a.strategy);
    config.limits = {a.budget, a.max_children, a.max_depth};
    config.base_seed = a.seed;
    config.jobs = a.jobs;

    const fs::path out = a.out.empty() ? fs::path("dataset.jsonl") : fs::path(a.out);
    const fs::path log = a.log_file.empty() ? fs::path("run_log.jsonl") : fs::path(a.log_file);
    const AnnotateStats stats =
        annotate_to_files(pairs, config, profile, *bundle.executor, bundle.hub, out, log);
    write_run_manifest(out, false, "annotate",
                       {{"strategy", a.strategy}, {"budget", a.budget}, {"pairs", a.pairs}},
                       a.seed, profile.raw);
    print_table({{"pairs", std::to_string(stats.pairs)},
                 {"retained (Pass)", std::to_string(stats.retained)},
                 {"dataset", out.string()}});
    return 0;
}

int cmd_pipeline(const Args& a) {
    const ProviderProfile profile = load_profile(a.config);
    HubBundle bundle = load_bundle(a.hub, a.sim_specs, profile);
    const fs::path out_dir = a.out.empty() ? fs::path("pipeline_out") : fs::path(a.out);

    // stage 1: hub filtering
    const auto reports = validate_hub(bundle.hub, *bundle.executor, a.latency_threshold_ms);
    const Hub filtered = filter_hub(bundle.hub, reports);
    std::cout << "hub: " << filtered.api_count() << "/" << bundle.hub.api_count()
              << " apis retained\n";

    // stage 2+3: instruction generation with hallucination filtering
    const Scenario scenario = scenario_from_string(a.scenario);
    GenCounters counters;
    const auto pairs =
        generate_pairs(filtered, scenario, a.count, a.seed, a.queries_per_call, counters);
    std::cout << "gen: " << counters.raw << " raw, " << counters.after_filter
              << " after hallucination filter, " << counters.emitted << " kept\n";
    std::vector<json> pair_records;
    for (const auto& p : pairs) pair_records.push_back(p.to_json());
    write_jsonl(out_dir / "pairs.jsonl", pair_records);

    // stage 4: pass-gated annotation
    AnnotateConfig config;
    config.strategy = strategy_from_string(a.strategy);
    config.limits = {a.budget, a.max_children, a.max_depth};
    config.base_seed = Rng::mix(a.seed, 0xa11);
    config.jobs = a.jobs;
    const AnnotateStats stats =
        annotate_to_files(pairs, config, profile, *bundle.executor, filtered,
                          out_dir / "dataset.jsonl", out_dir / "run_log.jsonl");
    std::cout << "annotate: " << stats.retained << "/" << stats.pairs << " paths retained\n";

    json manifest;
    manifest["command"] = "pipeline";
    manifest["seed"] = a.seed;
    manifest["scenario"] = a.scenario;
    manifest["strategy"] = a.strategy;
    manifest["budget"] = a.budget;
    manifest["count"] = a.count;
    manifest["provider"] = profile.kind;
    manifest["config_hash"] = config_hash(profile.raw);
    manifest["counts"] = {{"hub_apis", filtered.api_count()},
                          {"generated", counters.raw},
                          {"after_filter", counters.after_filter},
                          {"pairs", stats.pairs},
                          {"retained", stats.retained}};
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "dataset: " << (out_dir / "dataset.jsonl").string() << "\n";
    return 0;
}

int cmd_run(const Args& a) {
    if (a.suite.empty()) throw ConfigError("run: --suite is required");
    const auto tasks = load_tasks(a.suite);
    const StrategyKind kind = strategy_from_string(a.strategy);
    const SearchLimits limits{a.budget, a.max_children, a.max_depth};
    const fs::path out_dir = a.out.empty() ? fs::path("run_out") : fs::path(a.out);

    std::vector<json> episodes;
    std::vector<PassLabel> labels;
    for (const auto& rec : tasks) {
        StrategyRunResult r = run_task(rec, kind, limits, a.budget, a.seed);
        labels.push_back({r.label});
        json e;
        e["id"] = rec.id;
        e["strategy"] = to_string(kind);
        e["outcome"] = to_string(r.outcome);
        e["policy_calls"] = r.policy_calls;
        e["label"] = to_string(r.label);
        e["path"] = encode_path(r.path);
        episodes.push_back(std::move(e));
        if (r.tree) write_text_file(out_dir / "trees" / (rec.id + ".json"),
                                    export_tree(*r.tree).dump(2) + "\n");
    }
    write_jsonl(out_dir / "episodes.jsonl", episodes);
    write_run_manifest(out_dir, true, "run",
                       {{"strategy", a.strategy}, {"budget", a.budget}, {"suite", a.suite}},
                       a.seed, json::object());
    print_table({{"tasks", std::to_string(tasks.size())},
                 {"pass rate", fmt(pass_rate(labels))},
                 {"episodes", (out_dir / "episodes.jsonl").string()}});
    return 0;
}

int cmd_bench(const Args& a) {
    if (a.suite.empty()) throw ConfigError("bench: --suite is required");
    if (a.strategies.size() < 2)
        throw ConfigError("bench: need at least 2 strategies to compare");
    const auto tasks = load_tasks(a.suite);
    if (tasks.empty()) throw ConfigError("bench: no tasks in suite");
    const SearchLimits limits{a.budget, a.max_children, a.max_depth};

    std::set<std::string> scenarios;
    for (const auto& t : tasks) scenarios.insert(t.scenario);

    // DFSDT first: its measured mean cost becomes ReACT@N's cost target
    std::map<std::string, std::map<std::string, std::vector<PassLabel>>> by_scenario;
    std::map<std::string, std::vector<int>> costs;
    std::vector<StrategyKind> order;
    for (const auto& name : a.strategies) order.push_back(strategy_from_string(name));
    std::stable_sort(order.begin(), order.end(), [](StrategyKind x, StrategyKind y) {
        return (x == StrategyKind::dfsdt) > (y == StrategyKind::dfsdt);
    });

    int react_at_n_target = a.budget;
    std::vector<json> records;
    for (StrategyKind kind : order) {
        const int cost_target = kind == StrategyKind::react_at_n ? react_at_n_target : a.budget;
        for (const auto& rec : tasks) {
            StrategyRunResult r = run_task(rec, kind, limits, cost_target, a.seed);
            by_scenario[to_string(kind)][rec.scenario].push_back({r.label});
            costs[to_string(kind)].push_back(r.policy_calls);
            json e;
            e["id"] = rec.id;
            e["strategy"] = to_string(kind);
            e["label"] = to_string(r.label);
            e["policy_calls"] = r.policy_calls;
            records.push_back(std::move(e));
        }
        if (kind == StrategyKind::dfsdt) {
            const auto& c = costs[to_string(kind)];
            const double mean = static_cast<double>(std::accumulate(c.begin(), c.end(), 0)) /
                                static_cast<double>(c.size());
            react_at_n_target = std::max(1, static_cast<int>(mean + 0.5));
        }
    }

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"strategy"};
    for (const auto& s : scenarios) header.push_back(s);
    header.push_back("average");
    header.push_back("mean calls");
    table.push_back(header);
    for (const auto& name : a.strategies) {
        std::vector<std::string> row = {name};
        std::vector<PassLabel> all;
        for (const auto& s : scenarios) {
            const auto& labels = by_scenario[name][s];
            row.push_back(labels.empty() ? "-" : fmt(pass_rate(labels)));
            all.insert(all.end(), labels.begin(), labels.end());
        }
        row.push_back(fmt(pass_rate(all)));
        const auto& c = costs[name];
        const double mean = c.empty() ? 0.0
                                      : static_cast<double>(std::accumulate(c.begin(), c.end(), 0)) /
                                            static_cast<double>(c.size());
        row.push_back(fmt(mean, 2));
        table.push_back(std::move(row));
    }
    print_table(table);
    if (!a.out.empty()) {
        write_jsonl(a.out, records);
        json strategies = json::array();
        for (const auto& s : a.strategies) strategies.push_back(s);
        write_run_manifest(a.out, false, "bench",
                           {{"strategies", strategies},
                            {"budget", a.budget},
                            {"react_at_n_cost_target", react_at_n_target},
                            {"suite", a.suite}},
                           a.seed, json::object());
    }
    return 0;
}

int cmd_retrieve_eval(const Args& a) {
    const Hub hub = load_hub(resolve_hub_dir(a.hub));
    if (a.pairs.empty()) throw ConfigError("retrieve eval: --pairs is required");
    std::vector<InstructionPair> pairs;
    for (const auto& j : read_jsonl(a.pairs)) pairs.push_back(InstructionPair::from_json(j));
    const Scenario split = scenario_from_string(a.split);
    const auto cutoffs = parse_k_list(a.ks);

    Index index = build_index(hub);
    const bool want_embedding =
        std::find(a.scorers.begin(), a.scorers.end(), "embedding") != a.scorers.end();
    if (want_embedding) embed_index(index, hashed_bow_embedder());

    std::vector<std::vector<std::string>> table;
    std::vector<std::string> header = {"method"};
    for (auto k : cutoffs) header.push_back("NDCG@" + std::to_string(k));
    table.push_back(header);

    std::vector<json> records;
    const std::size_t max_k = *std::max_element(cutoffs.begin(), cutoffs.end());
    for (const auto& scorer_name : a.scorers) {
        const ScorerKind scorer =
            scorer_name == "bm25" ? ScorerKind::bm25 : ScorerKind::embedding;
        std::map<std::size_t, double> sums;
        std::size_t n = 0;
        for (const auto& p : pairs) {
            if (p.scenario != split) continue;
            const auto ranked = retrieve(p.query, index, max_k, scorer);
            std::vector<ApiKey> ranking;
            for (const auto& [key, score] : ranked) ranking.push_back(key);
            const std::set<ApiKey> relevant(p.related_apis.begin(), p.related_apis.end());
            for (auto k : cutoffs) sums[k] += ndcg_at_k(ranking, relevant, k);
            ++n;
        }
        if (n == 0) throw ConfigError("retrieve eval: no pairs in split " + a.split);
        std::vector<std::string> row = {scorer_name};
        json rec;
        rec["method"] = scorer_name;
        rec["split"] = a.split;
        for (auto k : cutoffs) {
            const double v = sums[k] / static_cast<double>(n);
            row.push_back(fmt(v, 4));
            rec["ndcg@" + std::to_string(k)] = v;
        }
        table.push_back(std::move(row));
        records.push_back(std::move(rec));
    }
    print_table(table);
    if (!a.out.empty()) write_jsonl(a.out, records);
    return 0;
}

int cmd_eval(const Args& a) {
    if (a.tasks.empty()) throw ConfigError("eval: --tasks is required");
    const auto tasks = load_eval_tasks(a.tasks);
    if (a.votes < 4) throw ConfigError("eval: --votes must be at least 4");

    if (a.eval_mode == "pass") {
        if (a.paths_a.empty()) throw ConfigError("eval pass: --paths is required");
        const auto judged = judge_paths_file(a.paths_a, tasks, a.votes);
        std::map<std::string, std::size_t> dist;
        std::vector<PassLabel> finals;
        std::vector<json> records;
        for (const auto& r : judged) {
            ++dist[to_string(r.final.value)];
            finals.push_back(r.final);
            json rec;
            rec["path_id"] = r.id;
            rec["votes"] = json::array();
            for (const auto& v : r.votes) rec["votes"].push_back(to_string(v.value));
            rec["final"] = to_string(r.final.value);
            records.push_back(std::move(rec));
        }
        print_table({{"paths", std::to_string(judged.size())},
                     {"pass rate", fmt(pass_rate(finals))},
                     {"Pass", std::to_string(dist["Pass"])},
                     {"Fail", std::to_string(dist["Fail"])},
                     {"Unsure", std::to_string(dist["Unsure"])}});
        if (!a.out.empty()) write_jsonl(a.out, records);
        return 0;
    }

    if (a.eval_mode == "win") {
        if (a.paths_a.empty() || a.paths_b.empty())
            throw ConfigError("eval win: --a and --b are required");
        const auto judged_a = judge_paths_file(a.paths_a, tasks, a.votes);
        const auto judged_b = judge_paths_file(a.paths_b, tasks, a.votes);
        if (judged_a.size() != judged_b.size())
            throw ConfigError("eval win: --a and --b must have the same number of paths");
        std::vector<Preference> prefs;
        std::vector<json> records;
        for (std::size_t i = 0; i < judged_a.size(); ++i) {
            JudgedPath pa{&judged_a[i].path, judged_a[i].facts, judged_a[i].final};
            JudgedPath pb{&judged_b[i].path, judged_b[i].facts, judged_b[i].final};
            // one comparison per vote; the rule judge makes them unanimous,
            // an LLM judge would not
            std::vector<Preference> vote_list;
            for (int v = 0; v < a.votes; ++v) vote_list.push_back(compare_paths(pa, pb));
            const Preference pref = vote_list.front();
            json rec;
            rec["pair_id"] = judged_a[i].id;
            rec["votes"] = json::array();
            for (const auto& v : vote_list) rec["votes"].push_back(to_string(v.value));
            rec["final"] = to_string(pref.value);
            rec["preference"] = to_string(pref.value);
            if (pref.deciding_criterion) rec["criterion"] = to_string(*pref.deciding_criterion);
            records.push_back(std::move(rec));
            prefs.push_back(pref);
        }
        std::map<std::string, std::size_t> dist;
        for (const auto& p : prefs) ++dist[to_string(p.value)];
        print_table({{"pairs", std::to_string(prefs.size())},
                     {"win rate (ties split)", fmt(win_rate(prefs))},
                     {"Win", std::to_string(dist["Win"])},
                     {"Tie", std::to_string(dist["Tie"])},
                     {"Lose", std::to_string(dist["Lose"])}});
        if (!a.out.empty()) write_jsonl(a.out, records);
        return 0;
    }
    throw ConfigError("eval: mode must be pass or win");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    std::vector<std::string> argv_strings = args;
    std::vector<char*> argv;
    static std::string prog = "toolforge";
    argv.push_back(prog.data());
    for (auto& s : argv_strings) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
    Args a;
    CLI::App app{"tool-use agent framework: hub, retrieval, search strategies, evaluation"};
    app.require_subcommand(1);

    app.add_option("--seed", a.seed, "global RNG seed");
    app.add_option("--jobs", a.jobs, "parallel episode workers");
    app.add_option("--config", a.config, "provider profile JSON");

    auto add_hub_opts = [&](CLI::App* cmd) {
        cmd->add_option("--hub", a.hub, "hub directory (or TOOLFORGE_HUB_DIR)");
        cmd->add_option("--sim-specs", a.sim_specs, "sim api spec file (jsonl)");
    };

    CLI::App* hub = app.add_subcommand("hub", "hub maintenance");
    CLI::App* hub_filter = hub->add_subcommand("filter", "validate and filter a hub");
    add_hub_opts(hub_filter);
    hub_filter->add_option("--latency-threshold-ms", a.latency_threshold_ms,
                           "max acceptable latency");
    hub_filter->add_option("--out", a.out, "output hub directory");

    CLI::App* gen = app.add_subcommand("gen", "generate instruction pairs");
    add_hub_opts(gen);
    gen->add_option("--scenario", a.scenario, "I1 | I2 | I3");
    gen->add_option("--count", a.count, "pairs to emit");
    gen->add_option("--queries-per-call", a.queries_per_call, "queries per generation call");
    gen->add_option("--out", a.out, "pairs output file");

    CLI::App* annotate = app.add_subcommand("annotate", "search solution paths and keep passes");
    add_hub_opts(annotate);
    annotate->add_option("--pairs", a.pairs, "instruction pairs file")->required();
    annotate->add_option("--strategy", a.strategy, "react | dfsdt");
    annotate->add_option("--budget", a.budget, "policy-call budget per episode");
    annotate->add_option("--max-children", a.max_children, "dfsdt max children per node");
    annotate->add_option("--max-depth", a.max_depth, "dfsdt max tree depth");
    annotate->add_option("--out", a.out, "dataset output file");
    annotate->add_option("--log", a.log_file, "run log output file");

    CLI::App* pipeline = app.add_subcommand("pipeline", "filter -> generate -> annotate");
    add_hub_opts(pipeline);
    pipeline->add_option("--scenario", a.scenario, "I1 | I2 | I3");
    pipeline->add_option("--count", a.count, "pairs to generate");
    pipeline->add_option("--queries-per-call", a.queries_per_call, "queries per generation call");
    pipeline->add_option("--strategy", a.strategy, "react | dfsdt");
    pipeline->add_option("--budget", a.budget, "policy-call budget per episode");
    pipeline->add_option("--latency-threshold-ms", a.latency_threshold_ms,
                         "max acceptable latency");
    pipeline->add_option("--out", a.out, "output directory");

    CLI::App* run_cmd = app.add_subcommand("run", "run one strategy over a task suite");
    run_cmd->add_option("--suite", a.suite, "task suite jsonl")->required();
    run_cmd->add_option("--strategy", a.strategy, "react | react@n | dfsdt");
    run_cmd->add_option("--budget", a.budget, "policy-call budget");
    run_cmd->add_option("--max-children", a.max_children, "dfsdt max children per node");
    run_cmd->add_option("--max-depth", a.max_depth, "dfsdt max tree depth");
    run_cmd->add_option("--out", a.out, "output directory");

    CLI::App* bench = app.add_subcommand("bench", "compare strategies at equal budget");
    bench->add_option("--suite", a.suite, "task suite jsonl")->required();
    bench->add_option("--strategies", a.strategies, "strategies to compare")
        ->delimiter(',');
    bench->add_option("--budget", a.budget, "policy-call budget");
    bench->add_option("--max-children", a.max_children, "dfsdt max children per node");
    bench->add_option("--max-depth", a.max_depth, "dfsdt max tree depth");
    bench->add_option("--out", a.out, "records output file");

    CLI::App* retrieve_cmd = app.add_subcommand("retrieve", "api retrieval");
    CLI::App* retrieve_eval = retrieve_cmd->add_subcommand("eval", "NDCG evaluation");
    add_hub_opts(retrieve_eval);
    retrieve_eval->add_option("--pairs", a.pairs, "instruction pairs file")->required();
    retrieve_eval->add_option("--split", a.split, "I1 | I2 | I3");
    retrieve_eval->add_option("--k", a.ks, "comma-separated cutoffs");
    retrieve_eval->add_option("--scorer", a.scorers, "bm25,embedding")->delimiter(',');
    retrieve_eval->add_option("--out", a.out, "records output file");
    CLI::App* retrieve_export =
        retrieve_cmd->add_subcommand("export", "contrastive training pairs");
    add_hub_opts(retrieve_export);
    retrieve_export->add_option("--pairs", a.pairs, "instruction pairs file")->required();
    retrieve_export->add_option("--negatives", a.negatives, "negatives per query");
    retrieve_export->add_option("--out", a.out, "training pairs output file");

    CLI::App* eval_cmd = app.add_subcommand("eval", "pass/win evaluation");
    CLI::App* eval_pass = eval_cmd->add_subcommand("pass", "pass-rate report");
    eval_pass->add_option("--paths", a.paths_a, "solution path file")->required();
    eval_pass->add_option("--tasks", a.tasks, "task metadata file")->required();
    eval_pass->add_option("--votes", a.votes, "predictions per path (>= 4)");
    eval_pass->add_option("--out", a.out, "records output file");
    CLI::App* eval_win = eval_cmd->add_subcommand("win", "pairwise win-rate report");
    eval_win->add_option("--a", a.paths_a, "first path file")->required();
    eval_win->add_option("--b", a.paths_b, "second path file")->required();
    eval_win->add_option("--tasks", a.tasks, "task metadata file")->required();
    eval_win->add_option("--votes", a.votes, "predictions per path (>= 4)");
    eval_win->add_option("--out", a.out, "records output file");

    CLI::App* simenv_cmd = app.add_subcommand("simenv", "simulation fixtures");
    CLI::App* simenv_gen = simenv_cmd->add_subcommand("generate", "emit sim hub + trap suite");
    simenv_gen->add_option("--traps", a.traps, "number of trap tasks");
    simenv_gen->add_option("--budget", a.budget, "budget the suite is verified against");
    simenv_gen->add_option("--max-children", a.max_children, "verification max children");
    simenv_gen->add_option("--max-depth", a.max_depth, "verification max depth");
    simenv_gen->add_option("--out", a.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (hub_filter->parsed()) return cmd_hub_filter(a);
        if (gen->parsed()) return cmd_gen(a);
        if (annotate->parsed()) return cmd_annotate(a);
        if (pipeline->parsed()) return cmd_pipeline(a);
        if (run_cmd->parsed()) return cmd_run(a);
        if (bench->parsed()) return cmd_bench(a);
        if (retrieve_eval->parsed()) return cmd_retrieve_eval(a);
        if (retrieve_export->parsed()) return cmd_retrieve_export(a);
        if (eval_pass->parsed()) {
            a.eval_mode = "pass";
            return cmd_eval(a);
        }
        if (eval_win->parsed()) {
            a.eval_mode = "win";
            return cmd_eval(a);
        }
        if (simenv_gen->parsed()) return cmd_simenv_generate(a);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DecodeError& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const ProviderFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const ExecutorUnavailable& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

}  // namespace toolforge::cli
