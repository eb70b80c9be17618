#include "infharm/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "infharm/errors.hpp"

namespace infharm {

namespace {

constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

// Per-vertex coin: the maximizer wins draw u when u < threshold, loses when
// u > threshold, and on u == threshold the call recurses into the residual
// fraction, so the win probability is exactly p = 1/(1+r).
struct Coin {
    std::uint64_t threshold = 0;
    mpz_class rem, den;  // residual = rem/den in [0,1)
};

Coin make_coin(const Rational& p) {
    Coin c;
    mpz_class shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), p.numerator().get_mpz_t(), 64);
    mpz_class q;
    mpz_fdiv_qr(q.get_mpz_t(), c.rem.get_mpz_t(), shifted.get_mpz_t(),
                p.denominator().get_mpz_t());
    if (!q.fits_ulong_p()) throw std::logic_error("coin threshold overflow");
    c.threshold = q.get_ui();
    c.den = p.denominator();
    return c;
}

bool maximizer_wins(const Coin& coin, SplitMix64& rng) {
    std::uint64_t u = rng.next();
    if (u < coin.threshold) return true;
    if (u > coin.threshold) return false;
    mpz_class num = coin.rem;
    for (;;) {
        if (num == 0) return false;
        mpz_class shifted, t, rem;
        mpz_mul_2exp(shifted.get_mpz_t(), num.get_mpz_t(), 64);
        mpz_fdiv_qr(t.get_mpz_t(), rem.get_mpz_t(), shifted.get_mpz_t(),
                    coin.den.get_mpz_t());
        u = rng.next();
        if (mpz_cmp_ui(t.get_mpz_t(), 0) > 0 &&
            (!t.fits_ulong_p() || u < t.get_ui()))
            return true;
        if (!t.fits_ulong_p() || u > t.get_ui()) return false;
        num = rem;
    }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t SplitMix64::next() {
    state += GOLDEN;
    return mix64(state);
}

GameEstimate simulate(const BoundaryProblem& problem, const Strategy& strategy,
                      int start, unsigned long trials, std::uint64_t seed,
                      unsigned long step_cap) {
    auto violations = validate(problem);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    int n = problem.graph.vertex_count();
    if (start < 0 || start >= n)
        throw std::invalid_argument("start vertex out of range");
    if (trials == 0) throw std::invalid_argument("at least one trial");

    std::vector<const DirectionChoice*> moves(n, nullptr);
    std::vector<Coin> coins(n);
    for (int v : problem.interior()) {
        auto it = strategy.find(v);
        if (it == strategy.end())
            throw Error("no direction choice for vertex \"" +
                        problem.graph.label(v) + "\"");
        for (int to : {it->second.max_to, it->second.min_to})
            if (to < 0 || to >= n || !problem.graph.edge_between(v, to))
                throw Error("direction at \"" + problem.graph.label(v) +
                            "\" names a non-neighbor");
        moves[v] = &it->second;
        coins[v] = make_coin(problem.bias.p_at(v));
    }

    GameEstimate out;
    out.trials = trials;
    out.seed = seed;
    Rational sum, sumsq;
    unsigned long absorbed = 0;
    for (unsigned long i = 0; i < trials; ++i) {
        SplitMix64 rng{mix64(seed + (i + 1) * GOLDEN)};
        int at = start;
        unsigned long steps = 0;
        while (!problem.is_boundary(at) && steps < step_cap) {
            const DirectionChoice& c = *moves[at];
            at = maximizer_wins(coins[at], rng) ? c.max_to : c.min_to;
            ++steps;
        }
        if (!problem.is_boundary(at)) {
            ++out.censored;
            continue;
        }
        const Rational& payoff = problem.value_at(at);
        sum += payoff;
        sumsq += payoff * payoff;
        ++absorbed;
    }

    if (absorbed == 0) throw Error("every trial hit the step cap");
    out.mean = sum / Rational(static_cast<long>(absorbed));
    if (absorbed > 1) {
        Rational na(static_cast<long>(absorbed));
        Rational variance = (sumsq - na * out.mean * out.mean) /
                            Rational(static_cast<long>(absorbed - 1));
        out.std_error = std::sqrt(variance.approx() / absorbed);
    }
    return out;
}

}  // namespace infharm
