#pragma once

#include <stdexcept>
#include <string>

namespace toolforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- hub ---

struct MissingField : Error {
    explicit MissingField(const std::string& k)
        : Error("missing required field: " + k), key(k) {}
    std::string key;
};

struct BadEnum : Error {
    BadEnum(const std::string& field, const std::string& value)
        : Error("bad enum value for " + field + ": " + value) {}
};

struct MissingReport : Error {
    MissingReport(const std::string& tool, const std::string& api)
        : Error("no health report for " + tool + "/" + api), tool(tool), api(api) {}
    std::string tool;
    std::string api;
};

struct ExecutorUnavailable : Error {
    explicit ExecutorUnavailable(const std::string& why)
        : Error("executor unavailable: " + why) {}
};

// --- retrieval ---

struct EmptyHub : Error {
    EmptyHub() : Error("hub has no tools") {}
};

struct VectorsMissing : Error {
    VectorsMissing() : Error("index has no embedding vectors") {}
};

struct EmptyRelevantSet : Error {
    EmptyRelevantSet() : Error("relevant set is empty") {}
};

struct UnknownApiKey : Error {
    UnknownApiKey(const std::string& tool, const std::string& api)
        : Error("unknown api key: " + tool + "/" + api) {}
};

struct NotEnoughNegatives : Error {
    NotEnoughNegatives(std::size_t want, std::size_t have)
        : Error("cannot sample " + std::to_string(want) + " negatives from " +
                std::to_string(have) + " candidates") {}
};

// --- agent kernel ---

struct DuplicateFunctionName : Error {
    explicit DuplicateFunctionName(const std::string& name)
        : Error("duplicate function name after sanitization: " + name) {}
};

struct MalformedAction : Error {
    explicit MalformedAction(const std::string& why)
        : Error("malformed action: " + why), reason(why) {}
    std::string reason;
};

struct EpisodeNotRunning : Error {
    EpisodeNotRunning() : Error("episode is not running") {}
};

struct DecodeError : Error {
    DecodeError(const std::string& why, std::size_t position)
        : Error("decode error at " + std::to_string(position) + ": " + why),
          position(position) {}
    std::size_t position;
};

// --- tooleval ---

struct TooFewVotes : Error {
    explicit TooFewVotes(std::size_t n)
        : Error("majority vote needs at least 4 predictions, got " + std::to_string(n)) {}
};

struct UnsureOperand : Error {
    UnsureOperand() : Error("cannot compare paths labeled Unsure") {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& what_input)
        : Error(what_input + " is empty") {}
};

// --- datagen ---

struct InsufficientTools : Error {
    explicit InsufficientTools(const std::string& why)
        : Error("insufficient tools: " + why) {}
};

struct PoolTooSmall : Error {
    PoolTooSmall(std::size_t have, std::size_t need)
        : Error("seed pool has " + std::to_string(have) + " examples, need " +
                std::to_string(need)) {}
};

struct GeneratorOutputUnparseable : Error {
    explicit GeneratorOutputUnparseable(const std::string& why)
        : Error("generator output unparseable: " + why) {}
};

// --- simenv ---

struct DuplicateKey : Error {
    DuplicateKey(const std::string& tool, const std::string& api)
        : Error("duplicate sim api key: " + tool + "/" + api) {}
};

// --- providers ---

struct ProviderFailure : Error {
    explicit ProviderFailure(const std::string& why)
        : Error("provider failure: " + why) {}
};

// --- cli ---

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace toolforge
