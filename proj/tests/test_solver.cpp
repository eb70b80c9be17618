#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "infharm/errors.hpp"
#include "infharm/iterate.hpp"
#include "infharm/solver.hpp"
#include "testutil.hpp"

using namespace infharm;

namespace {

std::map<std::string, Rational> by_label(const BoundaryProblem& p,
                                         const std::vector<Rational>& values) {
    std::map<std::string, Rational> out;
    for (int v = 0; v < p.graph.vertex_count(); ++v)
        out.emplace(p.graph.label(v), values[v]);
    return out;
}

// Expected designated directions of the nine-vertex fixture, as label pairs
// (max, min). dot's max and comma's min depend on the regime of r.
std::map<std::string, std::pair<std::string, std::string>>
corners9_strategy(const Rational& r) {
    bool dot_up = testutil::eval_poly({-1, -1, 0, 1}, r).sign() < 0;
    bool comma_down = testutil::eval_poly({-1, 0, 1, 1}, r).sign() < 0;
    return {
        {"BL", {"BR", "b0"}},
        {"BR", {"b1", "BL"}},
        {"dot", {dot_up ? "UL" : "BL", "b0"}},
        {"comma", {"b1", comma_down ? "BR" : "UR"}},
        {"UL", {"UR", "dot"}},
        {"UR", {"comma", "UL"}},
        {"T", {"UR", "UL"}},
    };
}

}  // namespace

TEST_CASE("two-edge path solves to the closed form") {
    for (const Rational& r :
         {Rational(1), Rational(2), Rational(1, 2), Rational(7, 3)}) {
        CAPTURE(r.str());
        BoundaryProblem p = testutil::path3(r);
        Solution s = solve_exact(p);
        CHECK(s.values[1] == (Rational(1) + r).reciprocal());
        REQUIRE(s.trace.size() == 1);
        CHECK(s.trace[0].vertices == std::vector<int>{0, 1, 2});
        CHECK(s.trace[0].slope.length == 2);
        CHECK(s.trace[0].slope.value == geom_sum(r, 2).reciprocal());
        REQUIRE(s.strategy.count(1) == 1);
        CHECK(s.strategy.at(1).max_to == 2);
        CHECK(s.strategy.at(1).min_to == 0);
        CHECK(s.basin_anchor.empty());
    }
}

TEST_CASE("nine-vertex fixture matches its closed form in every regime") {
    for (const Rational& r :
         {Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1),
          Rational(5, 4), Rational(3, 2), Rational(2), Rational(3),
          Rational(7, 3), Rational(4, 5), Rational(2, 5)}) {
        CAPTURE(r.str());
        BoundaryProblem p = testutil::corners9(r);
        Solution s = solve_exact(p);
        auto got = by_label(p, s.values);
        for (const auto& [label, expected] : testutil::corners9_values(r)) {
            CAPTURE(label);
            CHECK(got.at(label) == expected);
        }
    }
}

TEST_CASE("nine-vertex fixture directions, including both flips") {
    for (const Rational& r :
         {Rational(1, 2), Rational(1), Rational(2), Rational(13, 10),
          Rational(27, 20), Rational(7, 10), Rational(4, 5)}) {
        CAPTURE(r.str());
        BoundaryProblem p = testutil::corners9(r);
        Solution s = solve_exact(p);
        auto expected = corners9_strategy(r);
        CHECK(s.strategy.size() == expected.size());
        for (const auto& [label, dirs] : expected) {
            CAPTURE(label);
            int v = *p.graph.vertex_by_label(label);
            REQUIRE(s.strategy.count(v) == 1);
            CHECK(p.graph.label(s.strategy.at(v).max_to) == dirs.first);
            CHECK(p.graph.label(s.strategy.at(v).min_to) == dirs.second);
        }
    }
}

TEST_CASE("solving is deterministic") {
    BoundaryProblem p = testutil::corners9(Rational(5, 4));
    Solution a = solve_exact(p);
    Solution b = solve_exact(p);
    CHECK(a.values == b.values);
    CHECK(a.strategy == b.strategy);
    CHECK(a.trace == b.trace);
    CHECK(a.basin_anchor == b.basin_anchor);
}

TEST_CASE("trace slopes are nonincreasing and paths disjoint") {
    for (const Rational& r : {Rational(1, 2), Rational(1), Rational(2)}) {
        BoundaryProblem p = testutil::corners9(r);
        Solution s = solve_exact(p);
        REQUIRE(!s.trace.empty());
        for (std::size_t i = 1; i < s.trace.size(); ++i)
            CHECK(s.trace[i].slope.value <= s.trace[i - 1].slope.value);
        std::vector<char> seen(p.graph.vertex_count(), 0);
        for (int b : p.boundary) seen[b] = 1;
        for (const ConnectingPath& cp : s.trace) {
            CHECK(seen[cp.vertices.front()]);
            CHECK(seen[cp.vertices.back()]);
            for (std::size_t i = 1; i + 1 < cp.vertices.size(); ++i) {
                CHECK_FALSE(seen[cp.vertices[i]]);
                seen[cp.vertices[i]] = 1;
            }
        }
        for (int v = 0; v < p.graph.vertex_count(); ++v) CHECK(seen[v]);
    }
}

TEST_CASE("positive affine changes of the boundary data transport the"
          " solution") {
    SplitMix64 rng{31};
    for (int i = 0; i < 60; ++i) {
        BoundaryProblem p = testutil::random_problem(rng, 8);
        Rational alpha = testutil::random_rational(rng, 6, 4).abs() + 1;
        Rational beta = testutil::random_rational(rng, 10, 4);
        BoundaryProblem q = p;
        for (auto& [v, g] : q.boundary_values) g = alpha * g + beta;
        Solution sp = solve_exact(p);
        Solution sq = solve_exact(q);
        for (int v = 0; v < p.graph.vertex_count(); ++v)
            CHECK(sq.values[v] == alpha * sp.values[v] + beta);
    }
}

TEST_CASE("all-boundary problems have empty trace and keep their data") {
    BoundaryProblem p;
    p.graph = Graph::build({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}});
    p.boundary = {0, 1, 2};
    p.boundary_values = {{0, Rational(0)}, {1, Rational(1)}, {2, Rational(5)}};
    p.bias = Bias::uniform(Rational(1));
    Solution s = solve_exact(p);
    CHECK(s.values == std::vector<Rational>{0, 1, 5});
    CHECK(s.trace.empty());
    CHECK(s.strategy.empty());
    CHECK(s.basin_anchor.empty());

    // the selector still reports the steepest direct edge
    PartialExtension partial = PartialExtension::fresh(p);
    auto path = max_slope_connecting_path(p, partial);
    REQUIRE(path.has_value());
    CHECK(path->vertices == std::vector<int>{0, 2});
    CHECK(path->slope.length == 1);
    CHECK(path->slope.value == 5);
}

TEST_CASE("steepest path selection prefers steeper, then shorter") {
    // two parallel routes b0 -> b1: length 2 via m, length 3 via s1-s2
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "m", "b1", "s1", "s2"},
                           {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {4, 2}});
    p.boundary = {0, 2};
    p.boundary_values = {{0, Rational(0)}, {2, Rational(1)}};
    p.bias = Bias::uniform(Rational(1));
    PartialExtension partial = PartialExtension::fresh(p);
    auto path = max_slope_connecting_path(p, partial);
    REQUIRE(path.has_value());
    // slope 1/2 through m beats 1/3 through the long side
    CHECK(path->vertices == std::vector<int>{0, 1, 2});
    CHECK(path->slope.value == Rational(1, 2));

    Solution s = solve_exact(p);
    CHECK(s.values[1] == Rational(1, 2));
    // the slower route then fills with its own constant slope
    CHECK(s.values[3] == Rational(1, 3));
    CHECK(s.values[4] == Rational(2, 3));
}

TEST_CASE("extend_partial validates path shape") {
    BoundaryProblem p = testutil::corners9(Rational(1));
    PartialExtension partial = PartialExtension::fresh(p);
    auto make = [](std::vector<int> vs) {
        ConnectingPath cp;
        cp.vertices = std::move(vs);
        return cp;
    };
    // 0=b0 and 1=b1 are valued; 2..8 are not; 0-4-6-8 is a real path
    CHECK_NOTHROW(extend_partial(p, partial, make({0, 4, 2, 3, 1})));
    CHECK_THROWS_AS(extend_partial(p, partial, make({0})), Error);
    CHECK_THROWS_AS(extend_partial(p, partial, make({0, 4, 0})), Error);
    CHECK_THROWS_AS(extend_partial(p, partial, make({0, 4, 6})), Error);
    CHECK_THROWS_AS(extend_partial(p, partial, make({0, 6, 1})), Error);
    CHECK_THROWS_AS(extend_partial(p, partial, make({1, 3, 2, 0})), Error);

    PartialExtension grown = extend_partial(p, partial, make({0, 4, 2, 3, 1}));
    CHECK(grown.covered_count == partial.covered_count + 3);
    CHECK(grown.used_edge_count == 4);
    CHECK_THROWS_AS(extend_partial(p, grown, make({0, 4, 6, 8, 7, 1})), Error);
    // inner vertex 4 now carries a value
    CHECK_THROWS_AS(extend_partial(p, grown, make({0, 4, 6})), Error);
}

TEST_CASE("unreached components inherit their unique anchor value") {
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "c", "d"}, {{0, 1}, {1, 2}});
    p.boundary = {0};
    p.boundary_values = {{0, Rational(7, 3)}};
    p.bias = Bias::uniform(Rational(2));

    PartialExtension partial = PartialExtension::fresh(p);
    CHECK_FALSE(max_slope_connecting_path(p, partial).has_value());
    BasinFill fill = fill_isolated(p, partial);
    CHECK(fill.values == std::map<int, Rational>{{1, Rational(7, 3)},
                                                 {2, Rational(7, 3)}});
    CHECK(fill.anchor == std::map<int, int>{{1, 0}, {2, 0}});

    Solution s = solve_exact(p);
    CHECK(s.values == std::vector<Rational>(3, Rational(7, 3)));
    CHECK(s.trace.empty());
    CHECK(s.basin_anchor == std::map<int, int>{{1, 0}, {2, 0}});
    // constant regions designate max and min among equal neighbors by id
    CHECK(s.strategy.at(1).max_to == 0);
    CHECK(s.strategy.at(1).min_to == 0);
    for (const auto& [v, res] : harmonic_residual(p, s.values))
        CHECK(res.is_zero());
}

TEST_CASE("value comparisons stay exact far below double precision") {
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "u", "v", "b1"}, {{0, 1}, {1, 2}, {2, 3}});
    p.boundary = {0, 3};
    p.boundary_values = {{0, Rational(0)}, {3, Rational(1)}};
    p.bias = Bias::uniform(Rational(1));
    PartialExtension partial = PartialExtension::fresh(p);
    Rational tiny = Rational(1, 2).pow(200);
    partial.assign(1, Rational(1, 3));
    partial.assign(2, Rational(1, 3) + tiny);
    CHECK(partial.compare_values(1, 2) == -1);
    CHECK(partial.compare_values(2, 1) == 1);
    CHECK(partial.compare_values(1, 1) == 0);
    CHECK(partial.compare_values(0, 3) == -1);
    CHECK_THROWS_AS(partial.assign(3, Rational(1)), Error);  // already valued
}

TEST_CASE("random problems: steepest-path equals full enumeration") {
    SplitMix64 rng{32};
    for (int i = 0; i < 120; ++i) {
        BoundaryProblem p = testutil::random_problem(rng, 8);
        CAPTURE(serialize_problem(p));
        Solution s = solve_exact(p);
        BruteForce b = brute_force_solve(p);
        CHECK(s.values == b.values);
        for (const auto& [v, res] : harmonic_residual(p, s.values))
            CHECK(res.is_zero());
    }
}

TEST_CASE("harmonic_residual flags perturbed solutions") {
    BoundaryProblem p = testutil::corners9(Rational(2));
    Solution s = solve_exact(p);
    auto residuals = harmonic_residual(p, s.values);
    CHECK(residuals.size() == 7);
    for (const auto& [v, res] : residuals) CHECK(res.is_zero());

    std::vector<Rational> off = s.values;
    int dot = *p.graph.vertex_by_label("dot");
    off[dot] += Rational(1, 1000);
    auto bad = harmonic_residual(p, off);
    CHECK_FALSE(bad.at(dot).is_zero());

    std::vector<Rational> incomplete(p.graph.vertex_count() - 1, Rational(0));
    CHECK_THROWS_AS(harmonic_residual(p, incomplete), Error);
}

TEST_CASE("solve_exact rejects invalid problems and per-vertex bias") {
    CHECK_THROWS_AS(solve_exact(testutil::pervertex6()), Error);

    BoundaryProblem p = testutil::path3(Rational(1));
    p.boundary.clear();
    p.boundary_values.clear();
    CHECK_THROWS_AS(solve_exact(p), ValidationError);
}
