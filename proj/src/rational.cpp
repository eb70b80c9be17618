#include "infharm/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

#include "infharm/errors.hpp"

namespace infharm {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(mpq_class q) : v_(std::move(q)) {
    if (v_.get_den() == 0) throw std::domain_error("rational with zero denominator");
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] {
        throw ParseError("not a rational literal: \"" + std::string(text) + "\"");
    };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::size_t num_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_begin) fail();
    std::string num(text.substr(num_begin, i - num_begin));
    std::string den = "1";
    if (i < text.size()) {
        if (text[i] != '/') fail();
        ++i;
        std::size_t den_begin = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_begin || i != text.size()) fail();
        den = std::string(text.substr(den_begin));
    }
    mpq_class q;
    q.get_num() = mpz_class(num, 10);
    if (negative) q.get_num() = -q.get_num();
    q.get_den() = mpz_class(den, 10);
    if (q.get_den() == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    q.canonicalize();
    return Rational(std::move(q));
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational Rational::abs() const {
    Rational out = *this;
    mpq_abs(out.v_.get_mpq_t(), v_.get_mpq_t());
    return out;
}

Rational Rational::pow(unsigned long e) const {
    mpq_class out;
    mpz_pow_ui(out.get_num().get_mpz_t(), v_.get_num().get_mpz_t(), e);
    mpz_pow_ui(out.get_den().get_mpz_t(), v_.get_den().get_mpz_t(), e);
    // Powers of a canonical fraction stay canonical.
    return Rational(std::move(out));
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of zero");
    mpq_class out;
    mpq_inv(out.get_mpq_t(), v_.get_mpq_t());
    return Rational(std::move(out));
}

Rational Rational::operator-() const {
    Rational out = *this;
    mpq_neg(out.v_.get_mpq_t(), v_.get_mpq_t());
    return out;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

std::string Rational::decimal(unsigned digits) const {
    mpz_class num = v_.get_num();
    const mpz_class& den = v_.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class q = (num * scale * 2 + den) / (den * 2);
    std::string s = q.get_str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out;
    if (neg && q != 0) out += '-';
    out += s.substr(0, s.size() - digits);
    if (digits > 0) {
        out += '.';
        out += s.substr(s.size() - digits);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) {
    return os << x.str();
}

}  // namespace infharm
