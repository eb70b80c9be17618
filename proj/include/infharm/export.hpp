#pragma once

#include <string>
#include <vector>

#include "infharm/directions.hpp"
#include "infharm/problem.hpp"
#include "infharm/solver.hpp"

namespace infharm {

// Graphviz rendering of a problem. Boundary vertices are double-bordered
// and captioned "name=value". The solved overloads caption every vertex
// with its value and draw each interior vertex's designated directions as
// arrows along its edges: a single filled head toward the max neighbor, a
// doubled head toward the min neighbor, an open head when one neighbor
// plays both roles. Edges carrying no designation are drawn solid when they
// touch the boundary and dotted between interior vertices. Output is
// deterministic: vertices by id, edges by id.
std::string export_dot(const BoundaryProblem& problem);
std::string export_dot(const BoundaryProblem& problem,
                       const std::vector<Rational>& values,
                       const Strategy& strategy);
std::string export_dot(const BoundaryProblem& problem,
                       const Solution& solution);

}  // namespace infharm
