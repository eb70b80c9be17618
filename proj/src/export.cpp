#include "infharm/export.hpp"

#include <sstream>

namespace infharm {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

// Arrow glyph for one end of an edge, read off the designations of the
// vertex at the far end: single filled head for its max direction, doubled
// head for its min, open head when the two coincide.
std::string glyph(const Strategy* strategy, int from, int to) {
    if (!strategy) return "";
    auto it = strategy->find(from);
    if (it == strategy->end()) return "";
    bool mx = it->second.max_to == to;
    bool mn = it->second.min_to == to;
    if (mx && mn) return "onormal";
    if (mx) return "normal";
    if (mn) return "normalnormal";
    return "";
}

std::string render(const BoundaryProblem& problem,
                   const std::vector<Rational>* values,
                   const Strategy* strategy) {
    const Graph& g = problem.graph;
    std::ostringstream out;
    out << "digraph G {\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::string caption = g.label(v);
        if (problem.is_boundary(v))
            caption += "=" + problem.value_at(v).str();
        else if (values)
            caption += "=" + (*values)[v].str();
        out << "  " << quoted(g.label(v)) << " [label=" << quoted(caption);
        if (problem.is_boundary(v)) out << ", peripheries=2";
        out << "];\n";
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        std::string head = glyph(strategy, u, v);  // u's designation toward v
        std::string tail = glyph(strategy, v, u);
        out << "  " << quoted(g.label(u)) << " -> " << quoted(g.label(v))
            << " [";
        if (head.empty() && tail.empty()) {
            out << "dir=none";
            if (!problem.is_boundary(u) && !problem.is_boundary(v))
                out << ", style=dotted";
        } else if (tail.empty()) {
            out << "dir=forward, arrowhead=" << head;
        } else if (head.empty()) {
            out << "dir=back, arrowtail=" << tail;
        } else {
            out << "dir=both, arrowhead=" << head << ", arrowtail=" << tail;
        }
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string export_dot(const BoundaryProblem& problem) {
    return render(problem, nullptr, nullptr);
}

std::string export_dot(const BoundaryProblem& problem,
                       const std::vector<Rational>& values,
                       const Strategy& strategy) {
    return render(problem, &values, &strategy);
}

std::string export_dot(const BoundaryProblem& problem,
                       const Solution& solution) {
    return render(problem, &solution.values, &solution.strategy);
}

}  // namespace infharm
