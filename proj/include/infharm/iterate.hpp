#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "infharm/directions.hpp"
#include "infharm/problem.hpp"

namespace infharm {

// Monotone bracket produced by synchronous sweeps from below and above.
struct IterationResult {
    std::vector<Rational> lower, upper;  // indexed by vertex id
    unsigned long sweeps = 0;
    Rational max_gap;
    bool converged = false;
};

using SweepObserver =
    std::function<void(unsigned long sweep, const std::vector<Rational>& lower,
                       const std::vector<Rational>& upper)>;

// One synchronous update: every interior vertex is replaced by
// p_x*max(neighbors) + q_x*min(neighbors); boundary vertices stay pinned.
// The exact solution is a fixed point. Works for both bias kinds.
std::vector<Rational> sweep_once(const BoundaryProblem& problem,
                                 const std::vector<Rational>& current);

// 2^-40.
Rational default_tolerance();
// 10 * |V| * (1 + bit length of the boundary value range), where the bit
// length of a rational is bits(numerator) + bits(denominator).
unsigned long default_max_sweeps(const BoundaryProblem& problem);

// Iterates from the constant-min and constant-max starts until the largest
// pointwise gap is at most `tolerance` or `max_sweeps` sweeps have run.
// The lower iterates climb, the upper ones descend, and the exact solution
// stays between them at every sweep. The observer, when given, sees every
// sweep.
IterationResult value_iteration(const BoundaryProblem& problem,
                                const Rational& tolerance,
                                unsigned long max_sweeps,
                                const SweepObserver& observer = {});
IterationResult value_iteration(const BoundaryProblem& problem);

// Designated neighbors read off a value table: the largest-value and
// smallest-value neighbor of each interior vertex, smallest id on ties.
Strategy extract_directions(const BoundaryProblem& problem,
                            const std::vector<Rational>& values);

enum class DirectionStatus { consistent, inconsistent, singular };

struct DirectionSolve {
    DirectionStatus status = DirectionStatus::singular;
    // Filled whenever the linear system had a unique solution, i.e. for both
    // `consistent` and `inconsistent`; empty when `singular`.
    std::vector<Rational> values;
    // Smallest interior vertex whose designated neighbors fail to attain the
    // true max/min; -1 unless `inconsistent`.
    int offending_vertex = -1;
};

// Solves the linear system that pretends `strategy` names each interior
// vertex's max and min neighbor (exact Gaussian elimination, partial
// pivoting on the largest absolute value), then verifies the pretense
// against the solved values. A singular system is reported as such,
// distinctly from an inconsistent one.
DirectionSolve solve_with_directions(const BoundaryProblem& problem,
                                     const Strategy& strategy);

struct BruteForce {
    std::vector<Rational> values;
    unsigned long enumerated = 0;  // direction choices tried
    unsigned long consistent = 0;  // how many verified consistent
};

// Tries every direction choice (per interior vertex: its single neighbor,
// or all ordered pairs of distinct neighbors) and returns the common value
// table of the consistent ones. Every consistent choice must agree exactly;
// disagreement or an empty consistent set is a fatal internal error.
// Refuses to enumerate more than `cap` choices.
BruteForce brute_force_solve(const BoundaryProblem& problem,
                             unsigned long cap = 1000000);

struct HybridSolve {
    std::vector<Rational> values;
    unsigned long sweeps = 0;
    std::vector<int> undecided;  // vertices whose directions needed enumeration
};

// Exact solve for either bias kind: iterate until the bracket separates the
// direction choice at all but a few vertices, then enumerate only those.
// A neighbor stays a max candidate while its upper iterate reaches the
// layer's best lower iterate (dually for min), so the true choice is always
// enumerated; consistency checking makes any consistent hit the solution.
// Fails when more than `undecided_cap` vertices stay unseparated.
HybridSolve solve_hybrid(const BoundaryProblem& problem,
                         const Rational& tolerance, unsigned long max_sweeps,
                         unsigned undecided_cap = 20);
HybridSolve solve_hybrid(const BoundaryProblem& problem);

// Equivalent problem whose boundary carries only the two values m and M:
// every boundary vertex x gains two pendant neighbors valued m and M,
// becomes interior, and gets the bias r_x = (M - g(x)) / (g(x) - m) that
// reproduces g(x) there. Requires m < g(x) < M strictly. The original
// vertices keep their ids, so restricting the new solution to them yields
// the original solution. Defaults: m = min g - 1, M = max g + 1.
BoundaryProblem reduce_two_values(const BoundaryProblem& problem,
                                  const Rational& m, const Rational& M);
BoundaryProblem reduce_two_values(const BoundaryProblem& problem);

struct TreePiece {
    BoundaryProblem problem;        // dense local ids
    std::vector<int> original_ids;  // local id -> id in the input problem
};

struct NormalizedTree {
    std::vector<TreePiece> pieces;
    // Non-boundary leaves removed during normalization, in removal order:
    // (leaf, donor). Each leaf's solution value equals its donor's, so a
    // full value table is rebuilt by applying these back to front.
    std::vector<std::pair<int, int>> reconstruction;
};

// Splits a tree problem into pieces whose boundary is exactly their leaf
// set: iteratively removes non-boundary leaves (recording reconstruction
// rules), then detaches the tree at every non-leaf boundary vertex, which
// reappears as a shared boundary leaf of each piece.
NormalizedTree normalize_tree(const BoundaryProblem& problem);

// For a solved tree problem whose boundary is its leaf set: prunes every
// interior vertex of degree >= 3 down to the subtrees holding its smallest-
// and largest-valued neighbors until a single path remains, oriented from
// the smaller end value to the larger. Along that path every interior
// vertex sees its predecessor attain the min and its successor the max of
// its full neighborhood (verified; fails if `values` is not the solution).
std::vector<int> tree_harmonic_connection(const BoundaryProblem& problem,
                                          const std::vector<Rational>& values);

}  // namespace infharm
