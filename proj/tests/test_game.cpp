#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "infharm/errors.hpp"
#include "infharm/game.hpp"
#include "infharm/iterate.hpp"
#include "infharm/solver.hpp"
#include "testutil.hpp"

using namespace infharm;

TEST_CASE("splitmix64 produces the published stream") {
    // reference values of the standard generator from seed 0 and 1
    SplitMix64 rng{0};
    CHECK(rng.next() == 0xE220A8397B1DCDAFull);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
    CHECK(rng.next() == 0x06C45D188009454Full);
    SplitMix64 one{1};
    CHECK(one.next() == 0x910A2DEC89025CC1ull);
    // mix64 is the bare output permutation: next() is mix64 of the
    // incremented state, and the permutation fixes zero
    CHECK(mix64(0x9E3779B97F4A7C15ull) == 0xE220A8397B1DCDAFull);
    CHECK(mix64(0) == 0);
}

TEST_CASE("simulation is reproducible bit for bit") {
    BoundaryProblem p = testutil::path3(Rational(2));
    Solution s = solve_exact(p);
    GameEstimate a = simulate(p, s.strategy, 1, 5000, 99);
    GameEstimate b = simulate(p, s.strategy, 1, 5000, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.trials == 5000);
    CHECK(a.censored == b.censored);
    CHECK(a.seed == 99);

    GameEstimate c = simulate(p, s.strategy, 1, 5000, 100);
    CHECK(a.mean != c.mean);  // different seed, different stream
}

TEST_CASE("starting on the boundary pays the boundary value exactly") {
    BoundaryProblem p = testutil::path3(Rational(1));
    Solution s = solve_exact(p);
    GameEstimate est = simulate(p, s.strategy, 2, 100, 5);
    CHECK(est.mean == 1);
    CHECK(est.std_error == 0.0);
    CHECK(est.censored == 0);
}

TEST_CASE("estimates land within a few standard errors of the value") {
    BoundaryProblem p = testutil::path3(Rational(2));
    Solution s = solve_exact(p);
    GameEstimate est = simulate(p, s.strategy, 1, 20000, 7);
    CHECK(est.censored == 0);
    double gap = std::abs(est.mean.approx() - s.values[1].approx());
    CHECK(gap <= 4 * est.std_error);
    CHECK(est.std_error > 0.0);
    CHECK(est.std_error < 0.01);

    BoundaryProblem pv = testutil::pervertex6();
    Strategy strat = extract_directions(pv, brute_force_solve(pv).values);
    GameEstimate est2 = simulate(pv, strat, 1, 20000, 11);
    double gap2 = std::abs(est2.mean.approx() - 2.0);
    CHECK(gap2 <= 4 * est2.std_error);
}

TEST_CASE("the step cap censors long plays but keeps the absorbed mean") {
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "u", "v", "b1"}, {{0, 1}, {1, 2}, {2, 3}});
    p.boundary = {0, 3};
    p.boundary_values = {{0, Rational(0)}, {3, Rational(1)}};
    p.bias = Bias::uniform(Rational(1));
    Solution s = solve_exact(p);
    // from u, two moves either absorb (b0, or v then b1) or bounce back
    GameEstimate est = simulate(p, s.strategy, 1, 2000, 3, 2);
    CHECK(est.censored > 0);
    CHECK(est.censored < 2000);
    CHECK(est.mean.numerator() >= 0);
    CHECK(est.mean <= 1);

    // with three interior vertices and one move, the middle one can never
    // reach the boundary at all
    BoundaryProblem longer;
    longer.graph = Graph::build({"b0", "u", "v", "w", "b1"},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    longer.boundary = {0, 4};
    longer.boundary_values = {{0, Rational(0)}, {4, Rational(1)}};
    longer.bias = Bias::uniform(Rational(1));
    Solution sl = solve_exact(longer);
    CHECK_THROWS_AS(simulate(longer, sl.strategy, 2, 50, 3, 1), Error);
}

TEST_CASE("censored trials are excluded from the mean") {
    // from u, one step reaches b0 or v; with cap 1 only the b0 plays absorb
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "u", "v", "b1"}, {{0, 1}, {1, 2}, {2, 3}});
    p.boundary = {0, 3};
    p.boundary_values = {{0, Rational(5)}, {3, Rational(11)}};
    p.bias = Bias::uniform(Rational(1));
    Solution s = solve_exact(p);
    GameEstimate est = simulate(p, s.strategy, 1, 4000, 17, 1);
    CHECK(est.censored > 0);
    CHECK(est.mean == 5);  // every absorbed play ended at b0
}

TEST_CASE("strategy validation") {
    BoundaryProblem p = testutil::path3(Rational(1));
    Solution s = solve_exact(p);
    CHECK_THROWS_AS(simulate(p, Strategy{}, 1, 10, 1), Error);
    CHECK_THROWS_AS(simulate(p, Strategy{{1, {0, 5}}}, 1, 10, 1), Error);
    CHECK_THROWS_AS(simulate(p, Strategy{{1, {1, 0}}}, 1, 10, 1), Error);
    CHECK_THROWS_AS(simulate(p, s.strategy, 9, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate(p, s.strategy, -1, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate(p, s.strategy, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("biased coins match their bias empirically") {
    // on b0 - a - b1 with values 0/1 and max toward b1, a single step from
    // a absorbs immediately in either direction: the mean estimates p
    BoundaryProblem p;
    p.graph = Graph::build({"b0", "a", "b1"}, {{0, 1}, {1, 2}});
    p.boundary = {0, 2};
    p.boundary_values = {{0, Rational(0)}, {2, Rational(1)}};
    for (const Rational& r : {Rational(1), Rational(3), Rational(1, 3)}) {
        CAPTURE(r.str());
        p.bias = Bias::uniform(r);
        Strategy strat{{1, {2, 0}}};
        GameEstimate est = simulate(p, strat, 1, 40000, 23);
        double pwin = (Rational(1) + r).reciprocal().approx();
        CHECK(std::abs(est.mean.approx() - pwin) <= 4 * est.std_error);
    }
}
