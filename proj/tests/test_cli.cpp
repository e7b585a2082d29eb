#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "toolforge/cli.hpp"
#include "toolforge/hub_io.hpp"
#include "toolforge/simenv.hpp"

using namespace toolforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("toolforge_cli_" + std::to_string(std::rand()) + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub) const { return (path / sub).string(); }
};

std::string slurp(const fs::path& p) { return read_text_file(p); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("missing hub exits with the usage code") {
    TempDir dir;
    CHECK(cli::run({"hub", "filter", "--hub", dir.str("nope"), "--out", dir.str("out")}) == 2);
}

TEST_CASE("unknown flags exit with the usage code") {
    CHECK(cli::run({"gen", "--definitely-not-a-flag"}) == 2);
    CHECK(cli::run({"bench"}) == 2);  // --suite is required
    CHECK(cli::run({"eval", "win", "--a", "x"}) == 2);
}

TEST_CASE("bench refuses a single strategy") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "5", "simenv", "generate", "--traps", "2", "--out",
                      dir.str("sim")}) == 0);
    CHECK(cli::run({"bench", "--suite", dir.str("sim/tasks.jsonl"), "--strategies", "react"}) ==
          2);
}

TEST_CASE("corrupt task files exit with the decode code") {
    TempDir dir;
    write_text_file(dir.path / "bad.jsonl", "{broken\n");
    CHECK(cli::run({"run", "--suite", dir.str("bad.jsonl")}) == 4);
}

TEST_CASE("simenv generate emits a loadable hub and suite") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "9", "simenv", "generate", "--traps", "3", "--out",
                      dir.str("sim")}) == 0);
    const Hub hub = load_hub(dir.path / "sim" / "hub");
    CHECK(hub.api_count() > 0);
    CHECK(fs::exists(dir.path / "sim" / "hub" / "sim_specs.jsonl"));
    CHECK(read_jsonl(dir.path / "sim" / "tasks.jsonl").size() == 3);
}

TEST_CASE("pipeline then eval pass over its own outputs") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "4", "simenv", "generate", "--traps", "2", "--out",
                      dir.str("sim")}) == 0);
    REQUIRE(cli::run({"--seed", "21", "pipeline", "--hub", dir.str("sim/hub"), "--scenario",
                      "I2", "--count", "6", "--out", dir.str("pl")}) == 0);
    CHECK(fs::exists(dir.path / "pl" / "pairs.jsonl"));
    CHECK(fs::exists(dir.path / "pl" / "dataset.jsonl"));
    CHECK(fs::exists(dir.path / "pl" / "manifest.json"));

    // every dataset record decodes as a solution path
    for (const auto& j : read_jsonl(dir.path / "pl" / "dataset.jsonl")) {
        const SolutionPath p = decode_path(j);
        CHECK(p.final.kind == ActionKind::Finish);
    }

    SUBCASE("rerunning with the same seed is byte-identical") {
        REQUIRE(cli::run({"--seed", "21", "pipeline", "--hub", dir.str("sim/hub"), "--scenario",
                          "I2", "--count", "6", "--out", dir.str("pl2")}) == 0);
        CHECK(slurp(dir.path / "pl" / "pairs.jsonl") == slurp(dir.path / "pl2" / "pairs.jsonl"));
        CHECK(slurp(dir.path / "pl" / "dataset.jsonl") ==
              slurp(dir.path / "pl2" / "dataset.jsonl"));
        CHECK(slurp(dir.path / "pl" / "manifest.json") ==
              slurp(dir.path / "pl2" / "manifest.json"));
    }
}

TEST_CASE("run and eval commands complete over a trap suite") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "13", "simenv", "generate", "--traps", "4", "--out",
                      dir.str("sim")}) == 0);
    REQUIRE(cli::run({"run", "--suite", dir.str("sim/tasks.jsonl"), "--strategy", "dfsdt",
                      "--budget", "30", "--out", dir.str("run")}) == 0);
    const auto episodes = read_jsonl(dir.path / "run" / "episodes.jsonl");
    REQUIRE(episodes.size() == 4);

    // write path files (with ids) for eval
    std::vector<json> paths;
    for (const auto& e : episodes) {
        json p = e["path"];
        p["id"] = e["id"];
        paths.push_back(p);
    }
    write_jsonl(dir.path / "paths.jsonl", paths);
    CHECK(cli::run({"eval", "pass", "--paths", dir.str("paths.jsonl"), "--tasks",
                    dir.str("sim/tasks.jsonl"), "--votes", "4", "--out",
                    dir.str("judged.jsonl")}) == 0);
    const auto judged = read_jsonl(dir.path / "judged.jsonl");
    REQUIRE(judged.size() == 4);
    for (const auto& j : judged) {
        CHECK(j["votes"].size() == 4);
        CHECK(j["final"] == "Pass");  // dfsdt solves every trap task
    }

    // win mode: dfsdt paths vs react paths
    REQUIRE(cli::run({"run", "--suite", dir.str("sim/tasks.jsonl"), "--strategy", "react",
                      "--budget", "30", "--out", dir.str("run_react")}) == 0);
    std::vector<json> react_paths;
    for (const auto& e : read_jsonl(dir.path / "run_react" / "episodes.jsonl")) {
        json p = e["path"];
        p["id"] = e["id"];
        react_paths.push_back(p);
    }
    write_jsonl(dir.path / "react_paths.jsonl", react_paths);
    CHECK(cli::run({"eval", "win", "--a", dir.str("paths.jsonl"), "--b",
                    dir.str("react_paths.jsonl"), "--tasks", dir.str("sim/tasks.jsonl"),
                    "--out", dir.str("win.jsonl")}) == 0);
    const auto prefs = read_jsonl(dir.path / "win.jsonl");
    REQUIRE(prefs.size() == 4);
    for (const auto& p : prefs) {
        CHECK(p["preference"] == "Win");
        CHECK(p["criterion"] == "PassPrecedence");
    }
}

TEST_CASE("retrieve export writes contrastive training pairs") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "8", "simenv", "generate", "--traps", "1", "--out",
                      dir.str("sim")}) == 0);
    REQUIRE(cli::run({"--seed", "8", "gen", "--hub", dir.str("sim/hub"), "--scenario", "I2",
                      "--count", "4", "--out", dir.str("pairs.jsonl")}) == 0);
    REQUIRE(cli::run({"--seed", "8", "retrieve", "export", "--hub", dir.str("sim/hub"),
                      "--pairs", dir.str("pairs.jsonl"), "--negatives", "3", "--out",
                      dir.str("train.jsonl")}) == 0);
    const auto records = read_jsonl(dir.path / "train.jsonl");
    CHECK(!records.empty());
    for (const auto& r : records) {
        CHECK(r.contains("query"));
        CHECK(r["positive"].size() == 2);
        CHECK(r["negatives"].size() == 3);
        for (const auto& n : r["negatives"]) CHECK(n != r["positive"]);
    }
    CHECK(fs::exists(dir.path / "train.jsonl.manifest.json"));
}

TEST_CASE("retrieve eval prints an ndcg table over generated pairs") {
    TempDir dir;
    REQUIRE(cli::run({"--seed", "2", "simenv", "generate", "--traps", "1", "--out",
                      dir.str("sim")}) == 0);
    REQUIRE(cli::run({"--seed", "3", "gen", "--hub", dir.str("sim/hub"), "--scenario", "I1",
                      "--count", "5", "--out", dir.str("pairs.jsonl")}) == 0);
    CHECK(cli::run({"retrieve", "eval", "--hub", dir.str("sim/hub"), "--pairs",
                    dir.str("pairs.jsonl"), "--split", "I1", "--k", "1,5", "--out",
                    dir.str("ndcg.jsonl")}) == 0);
    const auto records = read_jsonl(dir.path / "ndcg.jsonl");
    REQUIRE(records.size() == 2);  // bm25 + embedding
    for (const auto& r : records) {
        CHECK(r.contains("ndcg@1"));
        CHECK(r.contains("ndcg@5"));
        CHECK(r["ndcg@1"].get<double>() >= 0.0);
        CHECK(r["ndcg@1"].get<double>() <= 1.0);
    }
}

}  // TEST_SUITE
