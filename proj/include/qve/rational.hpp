#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace qve {

// Arbitrary-precision rational, kept in canonical form (den > 0, gcd = 1).
// Thin value wrapper around GMP so call sites never meet expression
// templates and serialization stays under our control.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(long n, long d) : q_(n, d) {
        if (d == 0)
            throw std::domain_error("Rational: zero denominator");
        q_.canonicalize();
    }
    explicit Rational(const mpq_class &q) : q_(q) { q_.canonicalize(); }

    static Rational parse(const std::string &s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::runtime_error("Rational: bad literal '" + s + "'");
        q.canonicalize();
        return Rational(q);
    }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational &operator+=(const Rational &o) {
        q_ += o.q_;
        return *this;
    }
    Rational &operator-=(const Rational &o) {
        q_ -= o.q_;
        return *this;
    }
    Rational &operator*=(const Rational &o) {
        q_ *= o.q_;
        return *this;
    }
    Rational &operator/=(const Rational &o) {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b) {
        return a.q_ == b.q_;
    }
    friend bool operator!=(const Rational &a, const Rational &b) {
        return !(a == b);
    }
    friend bool operator<(const Rational &a, const Rational &b) {
        return a.q_ < b.q_;
    }

    Rational inv() const {
        if (is_zero())
            throw std::domain_error("Rational: inverse of zero");
        return Rational(mpq_class(1 / q_));
    }

    Rational pow(long e) const;

    // Canonical text form "p/q" with q > 0, e.g. "0/1", "-3/2".
    std::string str() const {
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    const mpq_class &raw() const { return q_; }

  private:
    mpq_class q_;
};

inline Rational Rational::pow(long e) const {
    if (e == 0)
        return Rational(1);
    Rational base = e > 0 ? *this : inv();
    long n = e > 0 ? e : -e;
    Rational r(1);
    while (n > 0) {
        if (n & 1)
            r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

inline Rational factorial(long n) {
    Rational r(1);
    for (long i = 2; i <= n; ++i)
        r *= Rational(i);
    return r;
}

// binomial(e, t) for arbitrary (possibly negative) integer e, t >= 0
inline Rational binomial(long e, long t) {
    Rational r(1);
    for (long i = 0; i < t; ++i)
        r *= Rational(e - i, i + 1);
    return r;
}

} // namespace qve
