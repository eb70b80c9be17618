#pragma once

#include <map>
#include <optional>
#include <vector>

#include "infharm/directions.hpp"
#include "infharm/problem.hpp"
#include "infharm/slope.hpp"

namespace infharm {

// State of the growing extension: which vertices already carry a value,
// which edges have been consumed by selections, and the values themselves.
// The double bounds mirror the exact values (outward-rounded) and only
// accelerate comparisons; every inconclusive comparison falls back to
// exact arithmetic.
struct PartialExtension {
    std::vector<char> covered;        // by vertex id
    std::vector<char> edge_used;      // by edge id
    std::vector<Rational> values;     // meaningful where covered
    std::vector<double> value_lo, value_hi;
    int covered_count = 0;
    int used_edge_count = 0;

    // Boundary vertices valued by g, no edges used.
    static PartialExtension fresh(const BoundaryProblem& problem);

    bool contains(int v) const { return covered[v] != 0; }
    const Rational& value(int v) const;
    void assign(int v, Rational value);

    // -1/0/+1 ordering of the values at two covered vertices.
    int compare_values(int a, int b) const;
};

// A path whose endpoints are already valued, whose inner vertices are fresh
// and distinct, and whose edges are unused; length 1 means a direct edge
// between two valued vertices.
struct ConnectingPath {
    std::vector<int> vertices;
    PathSlope slope;
    friend bool operator==(const ConnectingPath&, const ConnectingPath&) = default;
};

struct Solution {
    std::vector<Rational> values;          // indexed by vertex id
    Strategy strategy;                     // one entry per interior vertex
    std::vector<ConnectingPath> trace;     // value-assigning selections, in order
    std::map<int, int> basin_anchor;       // vertex -> anchor it inherited from
};

struct BasinFill {
    std::map<int, Rational> values;
    std::map<int, int> anchor;
};

// The steepest eligible path. Ties resolve: shorter length first, then
// smaller (start id, end id), then lexicographically smallest inner vertex
// sequence; equal-value endpoints orient from the smaller id. Uniform bias
// only. Returns nothing when no eligible path exists.
std::optional<ConnectingPath> max_slope_connecting_path(
    const BoundaryProblem& problem, const PartialExtension& partial);

// Values the inner vertices of `path` by the closed-form fill and marks its
// edges used. Rejects structurally invalid paths and decreasing endpoints.
PartialExtension extend_partial(const BoundaryProblem& problem,
                                const PartialExtension& partial,
                                const ConnectingPath& path);

// Values for the vertices no eligible path can reach: each component of the
// uncovered subgraph hangs off exactly one covered vertex (asserted) and
// inherits its value.
BasinFill fill_isolated(const BoundaryProblem& problem,
                        const PartialExtension& partial);

// Exact solution by repeated steepest-path selection. Uniform bias only;
// per-vertex-bias problems are rejected (solve them via the iterative
// module). The trace records every value-assigning selection; its slopes
// are checked nonincreasing and the final values are checked exactly
// harmonic before returning.
Solution solve_exact(const BoundaryProblem& problem);

// p_x*max(neighbors) + q_x*min(neighbors) - u(x) for every interior x.
// Zero everywhere iff `values` solves the problem. Works for both bias
// kinds. `values` must cover every vertex.
std::map<int, Rational> harmonic_residual(const BoundaryProblem& problem,
                                          const std::vector<Rational>& values);

}  // namespace infharm
