#include "toolforge/api_hub.hpp"

#include <algorithm>

#include "toolforge/text.hpp"

namespace toolforge {

ApiKey ApiKey::from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DecodeError("api key must be a [tool, api] pair", 0);
    return ApiKey{j[0].get<std::string>(), j[1].get<std::string>()};
}

HttpMethod parse_http_method(const std::string& s) {
    const std::string m = to_lower(trim(s));
    if (m == "get") return HttpMethod::GET;
    if (m == "post") return HttpMethod::POST;
    if (m == "put") return HttpMethod::PUT;
    if (m == "delete") return HttpMethod::DELETE_;
    if (m == "patch") return HttpMethod::PATCH;
    throw BadEnum("method", s);
}

std::string to_string(HttpMethod m) {
    switch (m) {
        case HttpMethod::GET: return "GET";
        case HttpMethod::POST: return "POST";
        case HttpMethod::PUT: return "PUT";
        case HttpMethod::DELETE_: return "DELETE";
        case HttpMethod::PATCH: return "PATCH";
    }
    return "GET";
}

ParamType parse_param_type(const std::string& s) {
    const std::string t = to_lower(trim(s));
    if (t == "string") return ParamType::STRING;
    if (t == "number") return ParamType::NUMBER;
    if (t == "boolean") return ParamType::BOOLEAN;
    if (t == "array") return ParamType::ARRAY;
    if (t == "object") return ParamType::OBJECT;
    if (t == "enum") return ParamType::ENUM;
    // RapidAPI docs carry ad-hoc tags ("DATE (YYYY-MM-DD)", "TIME"); treat as text
    return ParamType::STRING;
}

std::string to_string(ParamType t) {
    switch (t) {
        case ParamType::STRING: return "STRING";
        case ParamType::NUMBER: return "NUMBER";
        case ParamType::BOOLEAN: return "BOOLEAN";
        case ParamType::ARRAY: return "ARRAY";
        case ParamType::OBJECT: return "OBJECT";
        case ParamType::ENUM: return "ENUM";
    }
    return "STRING";
}

std::string to_string(ResponseQuality q) {
    switch (q) {
        case ResponseQuality::OK: return "OK";
        case ResponseQuality::HTTP_ERROR: return "HTTP_ERROR";
        case ResponseQuality::HTML_PAGE: return "HTML_PAGE";
        case ResponseQuality::ERROR_MESSAGE: return "ERROR_MESSAGE";
        case ResponseQuality::EMPTY: return "EMPTY";
    }
    return "EMPTY";
}

std::string to_string(Verdict v) { return v == Verdict::Retain ? "Retain" : "Discard"; }

std::size_t Hub::api_count() const {
    std::size_t n = 0;
    for (const auto& t : tools) n += t.api_list.size();
    return n;
}

std::vector<ApiKey> Hub::api_keys() const {
    std::vector<ApiKey> keys;
    keys.reserve(api_count());
    for (const auto& t : tools)
        for (const auto& a : t.api_list) keys.push_back({t.tool_name, a.name});
    return keys;
}

const ToolDoc* Hub::find_tool(const std::string& name) const {
    for (const auto& t : tools)
        if (t.tool_name == name) return &t;
    return nullptr;
}

const ApiDoc* Hub::find_api(const ApiKey& key) const {
    const ToolDoc* t = find_tool(key.tool);
    if (!t) return nullptr;
    for (const auto& a : t->api_list)
        if (a.name == key.api) return &a;
    return nullptr;
}

Hub make_hub(std::vector<ToolDoc> tools) {
    Hub hub;
    hub.tools = std::move(tools);
    std::set<std::string> tool_names;
    for (const auto& t : hub.tools) {
        if (!tool_names.insert(t.tool_name).second)
            throw Error("duplicate tool name in hub: " + t.tool_name);
        if (t.api_list.empty()) throw MissingField("api_list");
        std::set<std::string> api_names;
        for (const auto& a : t.api_list) {
            if (a.name.empty()) throw MissingField("name");
            if (!api_names.insert(a.name).second)
                throw Error("duplicate api name in tool " + t.tool_name + ": " + a.name);
        }
        if (!t.category.empty()) hub.categories.insert(t.category);
        for (const auto& c : t.collections) hub.collections[c].insert(t.tool_name);
    }
    return hub;
}

namespace {

const std::set<std::string> kApiKeys = {"name",
                                        "url",
                                        "description",
                                        "method",
                                        "required_parameters",
                                        "optional_parameters",
                                        "tool_name",
                                        "category_name",
                                        "example_response"};

const std::set<std::string> kToolKeys = {"name",       "tool_description", "api_list",
                                         "host_url",   "category_name",    "collections",
                                         "tool_name"};

ParamSpec parse_param(const json& j) {
    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
        throw MissingField("name");
    ParamSpec p;
    p.name = j["name"].get<std::string>();
    if (j.contains("type") && j["type"].is_string())
        p.type = parse_param_type(j["type"].get<std::string>());
    if (j.contains("description") && j["description"].is_string())
        p.description = j["description"].get<std::string>();
    if (j.contains("default")) p.default_value = j["default"];
    return p;
}

json serialize_param(const ParamSpec& p) {
    json j;
    j["name"] = p.name;
    j["type"] = to_string(p.type);
    j["description"] = p.description;
    j["default"] = p.default_value;
    return j;
}

ApiDoc parse_api(const json& j) {
    ApiDoc doc;
    if (!j.contains("name") || j["name"].get<std::string>().empty())
        throw MissingField("name");
    doc.name = j["name"].get<std::string>();
    if (!j.contains("method")) throw MissingField("method");
    doc.http_method = parse_http_method(j["method"].get<std::string>());
    if (j.contains("description") && j["description"].is_string())
        doc.description = j["description"].get<std::string>();
    if (j.contains("url") && j["url"].is_string()) doc.url = j["url"].get<std::string>();
    if (j.contains("required_parameters"))
        for (const auto& p : j["required_parameters"]) doc.required_parameters.push_back(parse_param(p));
    if (j.contains("optional_parameters"))
        for (const auto& p : j["optional_parameters"]) doc.optional_parameters.push_back(parse_param(p));
    if (j.contains("example_response")) {
        const auto& ex = j["example_response"];
        doc.example_response = ex.is_string() ? ex.get<std::string>() : ex.dump();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!kApiKeys.count(it.key())) doc.extras[it.key()] = it.value();
    }
    return doc;
}

}  // namespace

ToolDoc parse_tool_doc(const json& raw) {
    if (!raw.is_object()) throw DecodeError("tool doc must be an object", 0);
    ToolDoc doc;
    if (raw.contains("name"))
        doc.tool_name = raw["name"].get<std::string>();
    else if (raw.contains("tool_name"))
        doc.tool_name = raw["tool_name"].get<std::string>();
    if (doc.tool_name.empty()) throw MissingField("name");

    if (raw.contains("tool_description") && raw["tool_description"].is_string())
        doc.tool_description = raw["tool_description"].get<std::string>();
    if (raw.contains("host_url") && raw["host_url"].is_string())
        doc.host_url = raw["host_url"].get<std::string>();
    if (raw.contains("collections"))
        for (const auto& c : raw["collections"]) doc.collections.insert(c.get<std::string>());

    if (!raw.contains("api_list") || !raw["api_list"].is_array() || raw["api_list"].empty())
        throw MissingField("api_list");
    for (const auto& a : raw["api_list"]) {
        ApiDoc api = parse_api(a);
        // the per-api category/tool tags describe the enclosing tool
        if (a.contains("category_name") && doc.category.empty())
            doc.category = a["category_name"].get<std::string>();
        doc.api_list.push_back(std::move(api));
    }
    if (raw.contains("category_name") && raw["category_name"].is_string())
        doc.category = raw["category_name"].get<std::string>();

    for (auto it = raw.begin(); it != raw.end(); ++it) {
        if (!kToolKeys.count(it.key())) doc.extras[it.key()] = it.value();
    }
    return doc;
}

ToolDoc parse_tool_doc(const std::string& raw_text) {
    json parsed;
    try {
        parsed = json::parse(raw_text);
    } catch (const json::parse_error& e) {
        throw DecodeError(e.what(), e.byte);
    }
    return parse_tool_doc(parsed);
}

json serialize_tool_doc(const ToolDoc& doc) {
    json out;
    out["name"] = doc.tool_name;
    out["tool_description"] = doc.tool_description;
    if (!doc.host_url.empty()) out["host_url"] = doc.host_url;
    if (!doc.collections.empty()) out["collections"] = doc.collections;
    out["api_list"] = json::array();
    for (const auto& a : doc.api_list) {
        json aj;
        aj["name"] = a.name;
        aj["url"] = a.url;
        aj["description"] = a.description;
        aj["method"] = to_string(a.http_method);
        aj["required_parameters"] = json::array();
        for (const auto& p : a.required_parameters) aj["required_parameters"].push_back(serialize_param(p));
        aj["optional_parameters"] = json::array();
        for (const auto& p : a.optional_parameters) aj["optional_parameters"].push_back(serialize_param(p));
        aj["example_response"] = a.example_response;
        aj["tool_name"] = doc.tool_name;
        aj["category_name"] = doc.category;
        for (auto it = a.extras.begin(); it != a.extras.end(); ++it) aj[it.key()] = it.value();
        out["api_list"].push_back(std::move(aj));
    }
    for (auto it = doc.extras.begin(); it != doc.extras.end(); ++it) out[it.key()] = it.value();
    return out;
}

json default_probe_params(const ApiDoc& doc) {
    json params = json::object();
    auto fill = [&](const ParamSpec& p) {
        if (!p.default_value.is_null() &&
            !(p.default_value.is_string() && p.default_value.get<std::string>().empty())) {
            params[p.name] = p.default_value;
            return;
        }
        switch (p.type) {
            case ParamType::NUMBER: params[p.name] = 1; break;
            case ParamType::BOOLEAN: params[p.name] = true; break;
            case ParamType::ARRAY: params[p.name] = json::array(); break;
            case ParamType::OBJECT: params[p.name] = json::object(); break;
            default: params[p.name] = "example"; break;
        }
    };
    for (const auto& p : doc.required_parameters) fill(p);
    return params;
}

ResponseQuality classify_response(const ApiCallResult& result) {
    if (!result.transport_ok) return ResponseQuality::EMPTY;
    if (result.status < 200 || result.status >= 300) return ResponseQuality::HTTP_ERROR;
    const std::string body = trim(result.body);
    if (body.empty()) return ResponseQuality::EMPTY;
    if (body.front() == '<') return ResponseQuality::HTML_PAGE;
    if (body.front() == '{') {
        json parsed = json::parse(body, nullptr, false);
        if (parsed.is_object() && (parsed.contains("error") || parsed.contains("message"))) {
            bool has_content = false;
            for (auto it = parsed.begin(); it != parsed.end(); ++it) {
                if (it.key() == "error" || it.key() == "message") continue;
                const auto& v = it.value();
                if (v.is_null()) continue;
                if ((v.is_object() || v.is_array() || v.is_string()) && v.empty()) continue;
                has_content = true;
            }
            if (!has_content) return ResponseQuality::ERROR_MESSAGE;
        }
    }
    return ResponseQuality::OK;
}

HealthReport validate_api(const ApiDoc& doc, const std::string& tool_name,
                          ApiExecutor& executor, double latency_threshold_ms) {
    HealthReport report;
    const ApiKey key{tool_name, doc.name};
    // stage 1: reachability
    ApiCallResult result = executor.call(key, default_probe_params(doc));
    report.reachable = result.transport_ok;
    report.latency_ms = result.transport_ok ? result.latency_ms : 0.0;
    // stage 2: example-response evaluation
    report.quality = classify_response(result);

    if (!report.reachable) {
        report.verdict = Verdict::Discard;
        report.reason = "unreachable";
    } else if (report.quality != ResponseQuality::OK) {
        report.verdict = Verdict::Discard;
        report.reason = "low-quality response: " + to_string(report.quality);
    } else if (report.latency_ms > latency_threshold_ms) {
        report.verdict = Verdict::Discard;
        report.reason = "response time " + std::to_string(report.latency_ms) + " ms over threshold";
    } else {
        report.verdict = Verdict::Retain;
        report.reason = "ok";
    }
    return report;
}

std::map<ApiKey, HealthReport> validate_hub(const Hub& hub, ApiExecutor& executor,
                                            double latency_threshold_ms) {
    std::map<ApiKey, HealthReport> reports;
    for (const auto& t : hub.tools)
        for (const auto& a : t.api_list)
            reports[{t.tool_name, a.name}] = validate_api(a, t.tool_name, executor, latency_threshold_ms);
    return reports;
}

Hub filter_hub(const Hub& hub, const std::map<ApiKey, HealthReport>& reports) {
    std::vector<ToolDoc> kept;
    for (const auto& t : hub.tools) {
        ToolDoc copy = t;
        copy.api_list.clear();
        for (const auto& a : t.api_list) {
            auto it = reports.find({t.tool_name, a.name});
            if (it == reports.end()) throw MissingReport(t.tool_name, a.name);
            if (it->second.verdict == Verdict::Retain) copy.api_list.push_back(a);
        }
        if (!copy.api_list.empty()) kept.push_back(std::move(copy));
    }
    return make_hub(std::move(kept));
}

}  // namespace toolforge
