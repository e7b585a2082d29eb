#include "toolforge/http_provider.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>

#include "toolforge/prompts.hpp"
#include "toolforge/text.hpp"

namespace toolforge {

std::optional<std::string> provider_key_from_env() {
    const char* v = std::getenv("TOOLFORGE_PROVIDER_KEY");
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

ParsedUrl parse_url(const std::string& url) {
    ParsedUrl out;
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ProviderFailure("bad url: " + url);
    out.scheme = url.substr(0, scheme_end);
    const std::size_t host_begin = scheme_end + 3;
    const std::size_t path_begin = url.find('/', host_begin);
    if (path_begin == std::string::npos) {
        out.host_port = url.substr(host_begin);
        out.path = "/";
    } else {
        out.host_port = url.substr(host_begin, path_begin - host_begin);
        out.path = url.substr(path_begin);
    }
    if (out.host_port.empty()) throw ProviderFailure("bad url: " + url);
    return out;
}

namespace {

httplib::Headers auth_headers(const std::optional<std::string>& bearer) {
    httplib::Headers headers;
    if (bearer) headers.emplace("Authorization", "Bearer " + *bearer);
    return headers;
}

std::string query_string(const json& params) {
    std::string qs;
    for (auto it = params.begin(); it != params.end(); ++it) {
        qs += qs.empty() ? "?" : "&";
        const std::string value =
            it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
        qs += httplib::detail::encode_query_param(it.key()) + "=" +
              httplib::detail::encode_query_param(value);
    }
    return qs;
}

}  // namespace

ApiCallResult HttpApiExecutor::call(const ApiKey& key, const json& params) {
    auto it = catalog_.find(key);
    if (it == catalog_.end()) throw ExecutorUnavailable("no doc for " + key.str());
    const ApiDoc& doc = it->second;
    const ParsedUrl url = parse_url(doc.url);
    if (url.scheme != "http")
        throw ExecutorUnavailable("unsupported scheme " + url.scheme + " (build without TLS)");

    httplib::Client client(url.host_port);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    const auto started = std::chrono::steady_clock::now();
    httplib::Result res;
    const auto headers = auth_headers(bearer_);
    switch (doc.http_method) {
        case HttpMethod::GET:
            res = client.Get(url.path + query_string(params), headers);
            break;
        case HttpMethod::DELETE_:
            res = client.Delete(url.path + query_string(params), headers);
            break;
        case HttpMethod::POST:
            res = client.Post(url.path, headers, params.dump(), "application/json");
            break;
        case HttpMethod::PUT:
            res = client.Put(url.path, headers, params.dump(), "application/json");
            break;
        case HttpMethod::PATCH:
            res = client.Patch(url.path, headers, params.dump(), "application/json");
            break;
    }
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    ApiCallResult out;
    out.latency_ms = elapsed_ms;
    if (!res) {
        out.transport_ok = false;
        out.status = 0;
        return out;
    }
    out.transport_ok = true;
    out.status = res->status;
    out.body = res->body;
    return out;
}

json HttpChatPolicy::build_request(const PolicyQuery& query) const {
    json messages = json::array();
    std::string system = substitute(std::string(prompts::kSearchSystemPrompt), "task_description",
                                    query.instruction ? *query.instruction : "");
    messages.push_back({{"role", "system"}, {"content", system}});
    if (query.history) {
        for (const auto& s : *query.history) {
            if (s.action.kind == ActionKind::ApiCall) {
                messages.push_back(
                    {{"role", "assistant"},
                     {"content", s.action.thought},
                     {"function_call",
                      {{"name", s.action.api_name}, {"arguments", s.action.parameters.dump()}}}});
                messages.push_back({{"role", "function"},
                                    {"name", s.action.api_name},
                                    {"content", s.observation}});
            }
        }
    }
    if (!query.diversity_text.empty())
        messages.push_back({{"role", "user"}, {"content", query.diversity_text}});

    json body;
    body["model"] = model_;
    body["messages"] = messages;
    if (query.function_schemas) {
        body["functions"] = json::array();
        for (const auto& s : *query.function_schemas) body["functions"].push_back(s);
    }
    return body;
}

std::string HttpChatPolicy::decide(const PolicyQuery& query) {
    const ParsedUrl url = parse_url(endpoint_);
    if (url.scheme != "http")
        throw ProviderFailure("unsupported scheme " + url.scheme + " (build without TLS)");

    httplib::Client client(url.host_port);
    client.set_read_timeout(120, 0);
    httplib::Headers headers = auth_headers(api_key_);

    const std::string target = url.path == "/" ? path_ : url.path;
    auto res = client.Post(target, headers, build_request(query).dump(), "application/json");
    if (!res) throw ProviderFailure("no response from " + endpoint_);
    if (res->status != 200)
        throw ProviderFailure("chat endpoint returned HTTP " + std::to_string(res->status));

    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw ProviderFailure("chat endpoint returned non-JSON body");
    try {
        const json& message = reply.at("choices").at(0).at("message");
        json action;
        action["thought"] = message.value("content", "");
        if (message.contains("function_call")) {
            action["name"] = message["function_call"].at("name");
            action["arguments"] = message["function_call"].value("arguments", "{}");
        } else {
            // no function call: surface the text so the parser reports it
            return message.value("content", "");
        }
        return action.dump();
    } catch (const json::exception& e) {
        throw ProviderFailure(std::string("unexpected chat payload: ") + e.what());
    }
}

}  // namespace toolforge
