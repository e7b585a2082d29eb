#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toolforge/compression.hpp"
#include "toolforge/datagen.hpp"
#include "toolforge/retrieval.hpp"
#include "toolforge/simenv.hpp"

namespace py = pybind11;
using namespace toolforge;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

json py_to_json(py::handle obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json out = json::array();
        for (auto item : obj) out.push_back(py_to_json(item));
        return out;
    }
    if (py::isinstance<py::dict>(obj)) {
        json out = json::object();
        for (auto item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    throw py::type_error("cannot convert python object to json");
}

ApiKey key_from_py(py::handle obj) {
    auto pair = obj.cast<std::pair<std::string, std::string>>();
    return {pair.first, pair.second};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "tool-use agent framework: hub, retrieval, search and evaluation primitives";

    m.def("count_tokens", &count_tokens, py::arg("text"));

    m.def(
        "compress_response",
        [](const std::string& raw, std::size_t max_tokens, py::object drop_keys) {
            CompressionSchema schema;
            schema.max_tokens = max_tokens;
            if (!drop_keys.is_none())
                for (auto k : drop_keys) schema.drop_keys.insert(k.cast<std::string>());
            return compress_response(raw, schema);
        },
        py::arg("raw"), py::arg("max_tokens") = 1024, py::arg("drop_keys") = py::none());

    m.def(
        "ndcg_at_k",
        [](const std::vector<std::pair<std::string, std::string>>& ranking,
           const std::vector<std::pair<std::string, std::string>>& relevant, std::size_t k) {
            std::vector<ApiKey> r;
            for (const auto& [t, a] : ranking) r.push_back({t, a});
            std::set<ApiKey> rel;
            for (const auto& [t, a] : relevant) rel.insert({t, a});
            return ndcg_at_k(r, rel, k);
        },
        py::arg("ranking"), py::arg("relevant"), py::arg("k"));

    m.def(
        "judge_pass_rules",
        [](py::dict facts, bool solvable) {
            TaskMeta meta;
            meta.solvable = solvable;
            return to_string(judge_pass_rules(PathFacts::from_json(py_to_json(facts)), meta).value);
        },
        py::arg("facts"), py::arg("solvable") = true);

    m.def(
        "pass_rate",
        [](const std::vector<std::string>& labels) {
            std::vector<PassLabel> ls;
            for (const auto& s : labels) ls.push_back({pass_label_from_string(s)});
            return pass_rate(ls);
        },
        py::arg("labels"));

    m.def(
        "win_rate",
        [](const std::vector<std::string>& prefs) {
            std::vector<Preference> ps;
            for (const auto& s : prefs) ps.push_back({preference_from_string(s), std::nullopt});
            return win_rate(ps);
        },
        py::arg("preferences"));

    m.def(
        "parse_action",
        [](const std::string& raw) { return json_to_py(action_to_json(parse_action(raw))); },
        py::arg("raw"));

    m.def(
        "parse_tool_doc",
        [](const std::string& raw) { return json_to_py(serialize_tool_doc(parse_tool_doc(raw))); },
        py::arg("raw"));

    m.def(
        "render_function_schemas",
        [](py::handle tool_doc) {
            const ToolDoc doc = parse_tool_doc(py_to_json(tool_doc));
            py::list out;
            for (const auto& s : render_function_schemas(doc.api_list)) out.append(json_to_py(s));
            return out;
        },
        py::arg("tool_doc"));

    py::class_<Index>(m, "Index")
        .def_property_readonly("size", [](const Index& i) { return i.records.size(); })
        .def_property_readonly("avg_doc_len", [](const Index& i) { return i.avg_doc_len; })
        .def(
            "retrieve",
            [](const Index& index, const std::string& query, std::size_t k,
               const std::string& scorer) {
                const auto ranked = retrieve(query, index, k,
                                             scorer == "embedding" ? ScorerKind::embedding
                                                                   : ScorerKind::bm25);
                py::list out;
                for (const auto& [key, score] : ranked)
                    out.append(py::make_tuple(key.tool, key.api, score));
                return out;
            },
            py::arg("query"), py::arg("k") = 5, py::arg("scorer") = "bm25");

    m.def(
        "build_index",
        [](py::list tool_docs, bool with_embeddings) {
            std::vector<ToolDoc> tools;
            for (auto d : tool_docs) tools.push_back(parse_tool_doc(py_to_json(d)));
            Index index = build_index(make_hub(std::move(tools)));
            if (with_embeddings) embed_index(index, hashed_bow_embedder());
            return index;
        },
        py::arg("tool_docs"), py::arg("with_embeddings") = false);

    m.def(
        "run_search",
        [](py::dict script, const std::string& strategy, int budget, int max_children,
           int max_depth) {
            const ScriptTree tree = ScriptTree::from_json(py_to_json(script));
            std::set<std::string> api_names;
            std::function<void(const ScriptNode&)> walk = [&](const ScriptNode& n) {
                if (n.action.kind == ActionKind::ApiCall) api_names.insert(n.action.api_name);
                for (const auto& c : n.children) walk(c);
            };
            for (const auto& r : tree.roots) walk(r);
            std::vector<SimApiSpec> specs;
            for (const auto& name : api_names) specs.push_back({{"sim_tool", name}});
            auto [hub, executor] = build_sim_hub(specs, {});
            std::vector<ApiEntry> apis;
            for (const auto& t : hub.tools)
                for (const auto& a : t.api_list) apis.push_back({{t.tool_name, a.name}, a});

            ScriptedPolicy policy(tree);
            Episode ep;
            if (strategy == "react")
                ep = run_react("scripted task", apis, policy, *executor, budget);
            else
                ep = run_dfsdt("scripted task", apis, policy, *executor,
                               {budget, max_children, max_depth});
            py::dict out;
            out["outcome"] = to_string(ep.outcome);
            out["policy_calls"] = ep.policy_calls;
            out["path"] = json_to_py(encode_path(ep.path));
            if (ep.tree) out["tree"] = json_to_py(export_tree(*ep.tree));
            return out;
        },
        py::arg("script"), py::arg("strategy") = "dfsdt", py::arg("budget") = 30,
        py::arg("max_children") = 3, py::arg("max_depth") = 12);

    m.def(
        "oracle_search",
        [](py::dict script, int budget, int max_children, int max_depth) {
            const auto r = oracle_search(ScriptTree::from_json(py_to_json(script)), budget,
                                         max_children, max_depth);
            return py::make_tuple(r.answers,
                                  r.cost_to_answer ? py::object(py::int_(*r.cost_to_answer))
                                                   : py::object(py::none()));
        },
        py::arg("script"), py::arg("budget") = 30, py::arg("max_children") = 3,
        py::arg("max_depth") = 12);
}
