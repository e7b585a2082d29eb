#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "toolforge/errors.hpp"

namespace toolforge {

using json = nlohmann::json;

/// (tool_name, api_name) pair identifying one API hub-wide.
struct ApiKey {
    std::string tool;
    std::string api;

    auto operator<=>(const ApiKey&) const = default;

    json to_json() const { return json::array({tool, api}); }
    static ApiKey from_json(const json& j);
    std::string str() const { return tool + "/" + api; }
};

enum class HttpMethod { GET, POST, PUT, DELETE_, PATCH };

HttpMethod parse_http_method(const std::string& s);
std::string to_string(HttpMethod m);

enum class ParamType { STRING, NUMBER, BOOLEAN, ARRAY, OBJECT, ENUM };

ParamType parse_param_type(const std::string& s);
std::string to_string(ParamType t);

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::STRING;
    std::string description;
    json default_value;  // null when absent

    bool operator==(const ParamSpec&) const = default;
};

struct ApiDoc {
    std::string name;
    std::string description;
    std::string url;
    HttpMethod http_method = HttpMethod::GET;
    std::vector<ParamSpec> required_parameters;
    std::vector<ParamSpec> optional_parameters;
    std::string example_response;
    json extras = json::object();  // unknown keys, preserved verbatim

    bool operator==(const ApiDoc&) const = default;
};

struct ToolDoc {
    std::string tool_name;
    std::string tool_description;
    std::string host_url;
    std::string category;
    std::set<std::string> collections;
    std::vector<ApiDoc> api_list;
    json extras = json::object();

    bool operator==(const ToolDoc&) const = default;
};

struct Hub {
    std::vector<ToolDoc> tools;
    std::set<std::string> categories;
    std::map<std::string, std::set<std::string>> collections;  // collection -> tool names

    std::size_t api_count() const;
    std::vector<ApiKey> api_keys() const;
    const ToolDoc* find_tool(const std::string& name) const;
    const ApiDoc* find_api(const ApiKey& key) const;
};

/// Assembles a hub from tool docs, deriving category/collection maps and
/// checking the uniqueness invariants.
Hub make_hub(std::vector<ToolDoc> tools);

enum class ResponseQuality { OK, HTTP_ERROR, HTML_PAGE, ERROR_MESSAGE, EMPTY };
enum class Verdict { Retain, Discard };

std::string to_string(ResponseQuality q);
std::string to_string(Verdict v);

struct HealthReport {
    bool reachable = false;
    double latency_ms = 0.0;
    ResponseQuality quality = ResponseQuality::EMPTY;
    Verdict verdict = Verdict::Discard;
    std::string reason;
};

/// Outcome of one API invocation as seen by the caller. transport_ok=false
/// means the call itself never completed (timeout, connection failure) as
/// opposed to the API answering with an error payload.
struct ApiCallResult {
    bool transport_ok = true;
    int status = 0;
    std::string body;
    double latency_ms = 0.0;
};

/// Anything that can execute an API call: the simulated hub, a live REST
/// client, a canned test double. Throws ExecutorUnavailable only when the
/// executor itself is broken, never for a failing API.
class ApiExecutor {
public:
    virtual ~ApiExecutor() = default;
    virtual ApiCallResult call(const ApiKey& key, const json& params) = 0;
    /// Implementations safe to invoke from several episodes at once return true.
    virtual bool concurrent_safe() const { return false; }
};

// --- operations ---

ToolDoc parse_tool_doc(const json& raw);
ToolDoc parse_tool_doc(const std::string& raw_text);

/// Inverse of parse_tool_doc; extras are merged back in.
json serialize_tool_doc(const ToolDoc& doc);

/// Probes one API (reachability, then example-response evaluation) and
/// classifies the outcome. Default parameters are synthesized from the doc.
HealthReport validate_api(const ApiDoc& doc, const std::string& tool_name,
                          ApiExecutor& executor, double latency_threshold_ms = 2000.0);

/// Runs validate_api over the whole hub.
std::map<ApiKey, HealthReport> validate_hub(const Hub& hub, ApiExecutor& executor,
                                            double latency_threshold_ms = 2000.0);

/// Keeps exactly the APIs whose report says Retain; tools left with no APIs
/// are dropped and the category/collection maps pruned to match.
Hub filter_hub(const Hub& hub, const std::map<ApiKey, HealthReport>& reports);

ResponseQuality classify_response(const ApiCallResult& result);

/// Probe parameters for a health check: declared defaults where present,
/// type-appropriate placeholders otherwise.
json default_probe_params(const ApiDoc& doc);

}  // namespace toolforge
