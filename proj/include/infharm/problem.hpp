#pragma once

#include <map>
#include <string>
#include <vector>

#include "infharm/errors.hpp"
#include "infharm/graph.hpp"
#include "infharm/rational.hpp"

namespace infharm {

// Bias of the coin toss. A uniform bias r gives every interior vertex the
// advancing probability p = 1/(1+r) and retreating probability q = r/(1+r);
// a per-vertex bias assigns its own r_x to each interior vertex.
class Bias {
public:
    static Bias uniform(Rational r);
    static Bias per_vertex(std::map<int, Rational> table);

    bool is_uniform() const { return uniform_; }
    const Rational& uniform_r() const;
    const Rational& r_at(int v) const;
    // max-neighbor weight 1/(1+r_x)
    Rational p_at(int v) const;
    // min-neighbor weight r_x/(1+r_x)
    Rational q_at(int v) const;
    const std::map<int, Rational>& table() const { return table_; }

    friend bool operator==(const Bias&, const Bias&) = default;

private:
    bool uniform_ = true;
    Rational r_ = 1;
    std::map<int, Rational> table_;
};

// Boundary data on a graph: the set of boundary vertices with their
// prescribed values, plus the bias at interior vertices. Construction is
// permissive; `validate` reports semantic problems.
struct BoundaryProblem {
    Graph graph;
    std::vector<int> boundary;  // sorted, duplicate-free
    std::map<int, Rational> boundary_values;
    Bias bias;

    bool is_boundary(int v) const;
    const Rational& value_at(int v) const;  // boundary vertices only
    std::vector<int> interior() const;
    Rational min_boundary_value() const;
    Rational max_boundary_value() const;

    friend bool operator==(const BoundaryProblem&, const BoundaryProblem&) = default;
};

// Semantic checks: nonempty boundary, values on exactly the boundary set,
// strictly positive bias covering exactly the interior, connectivity.
// Structural graph invariants (simple, symmetric) hold by construction.
std::vector<Violation> validate(const BoundaryProblem& problem);

// Reads the documented JSON problem format and returns a problem that has
// already passed `validate`. Throws ParseError (with byte position for
// syntax errors) or ValidationError.
BoundaryProblem parse_problem(const std::string& text);

// Deterministic inverse of parse_problem up to formatting.
std::string serialize_problem(const BoundaryProblem& problem);

}  // namespace infharm
