#pragma once

#include <map>
#include <optional>
#include <string>

#include "toolforge/strategies.hpp"

namespace toolforge {

/// TOOLFORGE_PROVIDER_KEY, when set.
std::optional<std::string> provider_key_from_env();

struct ParsedUrl {
    std::string scheme;
    std::string host_port;  // "host" or "host:port"
    std::string path;
};

ParsedUrl parse_url(const std::string& url);

/// Executes API calls against real HTTP endpoints, using each ApiDoc's url
/// and method. A bearer token, when present, is passed through as-is.
class HttpApiExecutor : public ApiExecutor {
public:
    HttpApiExecutor(std::map<ApiKey, ApiDoc> catalog,
                    std::optional<std::string> bearer_token = provider_key_from_env(),
                    int timeout_seconds = 10)
        : catalog_(std::move(catalog)),
          bearer_(std::move(bearer_token)),
          timeout_seconds_(timeout_seconds) {}

    ApiCallResult call(const ApiKey& key, const json& params) override;
    bool concurrent_safe() const override { return true; }

private:
    std::map<ApiKey, ApiDoc> catalog_;
    std::optional<std::string> bearer_;
    int timeout_seconds_;
};

/// Chat-model policy speaking the OpenAI-style function-calling protocol.
/// decide() posts the conversation and returns the chosen function call as a
/// structured action. Throws ProviderFailure on transport or protocol errors.
class HttpChatPolicy : public Policy {
public:
    HttpChatPolicy(std::string endpoint, std::string model,
                   std::optional<std::string> api_key = provider_key_from_env(),
                   std::string path = "/v1/chat/completions")
        : endpoint_(std::move(endpoint)),
          model_(std::move(model)),
          api_key_(std::move(api_key)),
          path_(std::move(path)) {}

    std::string decide(const PolicyQuery& query) override;

    /// Request body for one query; exposed for tests and debugging.
    json build_request(const PolicyQuery& query) const;

private:
    std::string endpoint_;
    std::string model_;
    std::optional<std::string> api_key_;
    std::string path_;
};

}  // namespace toolforge
