#pragma once

#include <cstdint>

#include "infharm/directions.hpp"
#include "infharm/problem.hpp"

namespace infharm {

// splitmix64. Small, fast, and good enough for payoff averaging; the fixed
// increment is the 64-bit golden ratio.
struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next();
};

// The splitmix64 output permutation by itself, used to spread trial indices
// into independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

struct GameEstimate {
    Rational mean;               // exact average payoff of the absorbed trials
    double std_error = 0.0;      // sample standard error of that mean
    unsigned long trials = 0;
    unsigned long censored = 0;  // hit the step cap; excluded from the mean
    std::uint64_t seed = 0;
};

// Plays the biased tug-of-war `trials` times from `start`: each round the
// maximizing player wins the coin with probability p_x = 1/(1+r_x) and moves
// the token to their designated neighbor, the minimizing player to theirs,
// until the token hits the boundary and pays its value there. The coin is
// sampled exactly (threshold comparison on 64-bit draws, recursing into the
// residual on the boundary draw), sums are accumulated exactly, and trial i
// runs on its own stream seeded from mix64(seed + (i+1)*golden), so results
// are reproducible bit for bit and independent of trial order.
GameEstimate simulate(const BoundaryProblem& problem, const Strategy& strategy,
                      int start, unsigned long trials, std::uint64_t seed,
                      unsigned long step_cap = 1000000);

}  // namespace infharm
