#pragma once

#include <vector>

#include "infharm/rational.hpp"

namespace infharm {

// 1 + r + ... + r^(n-1); n = 0 gives 0. Works for every positive r with no
// special case at r = 1.
Rational geom_sum(const Rational& r, unsigned long n);

// Biased slope of a path of n edges from a vertex valued gx to one valued gy:
// (gy - r^n * gx) / geom_sum(r, n). Requires n >= 1 and r > 0. Positively
// homogeneous in the values but not symmetric: the reverse direction differs
// unless gx == gy.
Rational r_slope(const Rational& gx, const Rational& gy, const Rational& r,
                 unsigned long n);

// Slope of a concrete path together with what it was computed from.
struct PathSlope {
    Rational value;
    unsigned long length = 0;
    Rational start_value;
    Rational end_value;
    friend bool operator==(const PathSlope&, const PathSlope&) = default;
};

// Values of the n-1 interior vertices of a path of n edges whose endpoints
// are fixed at m and M (m <= M), such that every interior vertex satisfies
// u = p*max(neighbors) + q*min(neighbors) with p = 1/(1+r). Built from the
// increment identity u(x_{i+1}) - u(x_i) = (M-m) * r^i / geom_sum(r, n),
// which needs no branch at r = 1. Requires n >= 1 and r > 0.
std::vector<Rational> path_fill(const Rational& m, const Rational& M,
                                unsigned long n, const Rational& r);

}  // namespace infharm
