#include "infharm/slope.hpp"

#include <stdexcept>

namespace infharm {

Rational geom_sum(const Rational& r, unsigned long n) {
    if (r.sign() <= 0) throw std::invalid_argument("geom_sum needs r > 0");
    Rational sum = 0;
    Rational power = 1;
    for (unsigned long k = 0; k < n; ++k) {
        sum += power;
        power *= r;
    }
    return sum;
}

Rational r_slope(const Rational& gx, const Rational& gy, const Rational& r,
                 unsigned long n) {
    if (n == 0) throw std::invalid_argument("r_slope needs a path of length >= 1");
    if (r.sign() <= 0) throw std::invalid_argument("r_slope needs r > 0");
    return (gy - r.pow(n) * gx) / geom_sum(r, n);
}

std::vector<Rational> path_fill(const Rational& m, const Rational& M,
                                unsigned long n, const Rational& r) {
    if (n == 0) throw std::invalid_argument("path_fill needs a path of length >= 1");
    if (r.sign() <= 0) throw std::invalid_argument("path_fill needs r > 0");
    if (M < m) throw std::invalid_argument("path_fill needs m <= M");
    const Rational step = (M - m) / geom_sum(r, n);
    std::vector<Rational> out;
    out.reserve(n - 1);
    Rational u = m;
    Rational power = 1;  // r^i
    for (unsigned long i = 0; i + 1 < n; ++i) {
        u += step * power;
        power *= r;
        out.push_back(u);
    }
    return out;
}

}  // namespace infharm
