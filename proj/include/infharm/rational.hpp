#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace infharm {

// Exact rational number, always in canonical form: gcd(num, den) == 1,
// den > 0, and zero is 0/1. All solver arithmetic runs through this type;
// doubles appear only in Monte Carlo summaries and comparison fast paths.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}             // NOLINT: implicit by design
    Rational(int n) : v_(n) {}              // NOLINT
    Rational(long num, long den);
    explicit Rational(mpq_class q);

    // Accepts an optional sign, digits, and an optional "/digits" suffix:
    // "7", "-3/4", "+0/9". Anything else (including whitespace and decimal
    // points) is rejected.
    static Rational parse(std::string_view text);

    // "n" when the denominator is 1, "n/d" otherwise.
    std::string str() const;

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    Rational abs() const;

    // Nonnegative integer exponent.
    Rational pow(unsigned long e) const;
    Rational reciprocal() const;

    // Truncated toward zero; off by less than one ulp from the true value.
    double approx() const { return v_.get_d(); }

    // Fixed-point rendering with `digits` fractional digits, rounded half
    // away from zero: parse("1/3").decimal(4) is "0.3333".
    std::string decimal(unsigned digits) const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) <=> 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x);

    // Escape hatch for performance-sensitive internals.
    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

}  // namespace infharm
