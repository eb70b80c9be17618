#include "infharm/problem.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>
#include <stdexcept>

namespace infharm {

Bias Bias::uniform(Rational r) {
    Bias b;
    b.uniform_ = true;
    b.r_ = std::move(r);
    return b;
}

Bias Bias::per_vertex(std::map<int, Rational> table) {
    Bias b;
    b.uniform_ = false;
    b.table_ = std::move(table);
    return b;
}

const Rational& Bias::uniform_r() const {
    if (!uniform_) throw Error("bias is per-vertex, no uniform r");
    return r_;
}

const Rational& Bias::r_at(int v) const {
    if (uniform_) return r_;
    auto it = table_.find(v);
    if (it == table_.end())
        throw Error("no bias at vertex " + std::to_string(v));
    return it->second;
}

Rational Bias::p_at(int v) const {
    return (Rational(1) + r_at(v)).reciprocal();
}

Rational Bias::q_at(int v) const {
    const Rational& r = r_at(v);
    return r / (Rational(1) + r);
}

bool BoundaryProblem::is_boundary(int v) const {
    return std::binary_search(boundary.begin(), boundary.end(), v);
}

const Rational& BoundaryProblem::value_at(int v) const {
    auto it = boundary_values.find(v);
    if (it == boundary_values.end())
        throw Error("vertex " + std::to_string(v) + " carries no boundary value");
    return it->second;
}

std::vector<int> BoundaryProblem::interior() const {
    std::vector<int> out;
    for (int v = 0; v < graph.vertex_count(); ++v)
        if (!is_boundary(v)) out.push_back(v);
    return out;
}

Rational BoundaryProblem::min_boundary_value() const {
    if (boundary_values.empty()) throw Error("empty boundary");
    Rational m = boundary_values.begin()->second;
    for (const auto& [v, g] : boundary_values)
        if (g < m) m = g;
    return m;
}

Rational BoundaryProblem::max_boundary_value() const {
    if (boundary_values.empty()) throw Error("empty boundary");
    Rational m = boundary_values.begin()->second;
    for (const auto& [v, g] : boundary_values)
        if (g > m) m = g;
    return m;
}

std::vector<Violation> validate(const BoundaryProblem& problem) {
    std::vector<Violation> out;
    const Graph& g = problem.graph;
    const int n = g.vertex_count();

    if (problem.boundary.empty())
        out.push_back({"empty-boundary", "at least one boundary vertex is required"});
    if (!std::is_sorted(problem.boundary.begin(), problem.boundary.end()) ||
        std::adjacent_find(problem.boundary.begin(), problem.boundary.end()) !=
            problem.boundary.end())
        out.push_back({"boundary-set", "boundary ids must be sorted and distinct"});
    for (int v : problem.boundary)
        if (v < 0 || v >= n)
            out.push_back({"boundary-set", "boundary id " + std::to_string(v) +
                                               " out of range"});

    {
        std::set<int> bset(problem.boundary.begin(), problem.boundary.end());
        std::set<int> vset;
        for (const auto& [v, value] : problem.boundary_values) vset.insert(v);
        if (bset != vset)
            out.push_back({"boundary-values",
                           "values must be given on exactly the boundary set"});
    }

    if (problem.bias.is_uniform()) {
        if (problem.bias.uniform_r().sign() <= 0)
            out.push_back({"nonpositive-bias", "uniform bias r must be positive"});
    } else {
        std::set<int> covered;
        for (const auto& [v, r] : problem.bias.table()) {
            covered.insert(v);
            if (r.sign() <= 0)
                out.push_back({"nonpositive-bias",
                               "bias at vertex " + std::to_string(v) +
                                   " must be positive"});
        }
        std::set<int> interior;
        for (int v = 0; v < n; ++v)
            if (!problem.is_boundary(v)) interior.insert(v);
        if (covered != interior)
            out.push_back({"bias-coverage",
                           "per-vertex bias must cover exactly the interior"});
    }

    if (!g.connected())
        out.push_back({"disconnected", "the graph must be connected"});

    return out;
}

namespace {

using json = nlohmann::ordered_json;

Rational value_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ParseError(where + ": exact values are integers or \"num/den\" strings");
}

}  // namespace

BoundaryProblem parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " +
                             e.what(),
                         e.byte);
    }
    if (!doc.is_object()) throw ParseError("problem document must be an object");
    for (const auto& [key, unused] : doc.items()) {
        if (key != "vertices" && key != "edges" && key != "boundary" && key != "bias")
            throw ParseError("unknown field \"" + key + "\"");
    }
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParseError("missing \"vertices\" list");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw ParseError("missing \"edges\" list");
    if (!doc.contains("boundary") || !doc["boundary"].is_array())
        throw ParseError("missing \"boundary\" list");
    if (!doc.contains("bias") || !doc["bias"].is_object())
        throw ParseError("missing \"bias\" object");

    std::vector<std::string> labels;
    for (const auto& v : doc["vertices"]) {
        if (!v.is_string()) throw ParseError("vertex labels must be strings");
        labels.push_back(v.get<std::string>());
    }

    auto id_of = [&labels](const std::string& label,
                           const std::string& where) -> int {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end())
            throw ParseError(where + ": unknown vertex \"" + label + "\"");
        return static_cast<int>(it - labels.begin());
    };

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw ParseError("edges must be [\"u\", \"v\"] label pairs");
        edges.emplace_back(id_of(e[0].get<std::string>(), "edge"),
                           id_of(e[1].get<std::string>(), "edge"));
    }

    Graph graph = Graph::build(std::move(labels), std::move(edges));

    std::vector<int> boundary;
    std::map<int, Rational> boundary_values;
    for (const auto& b : doc["boundary"]) {
        if (!b.is_object() || !b.contains("label") || !b.contains("value") ||
            !b["label"].is_string())
            throw ParseError("boundary entries must be {\"label\", \"value\"}");
        int v = [&] {
            const std::string label = b["label"].get<std::string>();
            auto found = graph.vertex_by_label(label);
            if (!found) throw ParseError("boundary: unknown vertex \"" + label + "\"");
            return *found;
        }();
        if (boundary_values.contains(v))
            throw ParseError("boundary vertex \"" + graph.label(v) +
                             "\" listed twice");
        boundary.push_back(v);
        boundary_values.emplace(v, value_from_json(b["value"], "boundary value"));
    }
    std::sort(boundary.begin(), boundary.end());

    const json& jbias = doc["bias"];
    Bias bias;
    const bool has_r = jbias.contains("r");
    const bool has_pv = jbias.contains("perVertex");
    if (has_r == has_pv)
        throw ParseError("\"bias\" needs exactly one of \"r\" or \"perVertex\"");
    if (has_r) {
        bias = Bias::uniform(value_from_json(jbias["r"], "bias r"));
    } else {
        if (!jbias["perVertex"].is_object())
            throw ParseError("\"perVertex\" must map labels to values");
        std::map<int, Rational> table;
        for (const auto& [label, value] : jbias["perVertex"].items()) {
            auto found = graph.vertex_by_label(label);
            if (!found)
                throw ParseError("bias: unknown vertex \"" + label + "\"");
            table.emplace(*found, value_from_json(value, "bias at " + label));
        }
        bias = Bias::per_vertex(std::move(table));
    }

    BoundaryProblem problem{std::move(graph), std::move(boundary),
                            std::move(boundary_values), std::move(bias)};
    if (auto violations = validate(problem); !violations.empty())
        throw ValidationError(std::move(violations));
    return problem;
}

std::string serialize_problem(const BoundaryProblem& problem) {
    json doc;
    doc["vertices"] = json::array();
    for (int v = 0; v < problem.graph.vertex_count(); ++v)
        doc["vertices"].push_back(problem.graph.label(v));
    doc["edges"] = json::array();
    for (int e = 0; e < problem.graph.edge_count(); ++e) {
        auto [u, v] = problem.graph.edge(e);
        doc["edges"].push_back({problem.graph.label(u), problem.graph.label(v)});
    }
    doc["boundary"] = json::array();
    for (int v : problem.boundary)
        doc["boundary"].push_back(
            {{"label", problem.graph.label(v)}, {"value", problem.value_at(v).str()}});
    if (problem.bias.is_uniform()) {
        doc["bias"] = {{"r", problem.bias.uniform_r().str()}};
    } else {
        json table = json::object();
        for (const auto& [v, r] : problem.bias.table())
            table[problem.graph.label(v)] = r.str();
        doc["bias"] = {{"perVertex", std::move(table)}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace infharm
