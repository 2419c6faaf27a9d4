#pragma once

#include "qve/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qve {

// Truncated power series in the deformation parameter h, exact rational
// coefficients, fixed truncation order K (arithmetic closed modulo h^K).
class HSeries {
  public:
    HSeries() : k_(0) {}
    explicit HSeries(int k) : k_(k), c_(k) {}
    HSeries(int k, const Rational &c0) : k_(k), c_(k) {
        if (k > 0)
            c_[0] = c0;
    }

    static HSeries h(int k, int power = 1) {
        HSeries s(k);
        if (power < k)
            s.c_[power] = Rational(1);
        return s;
    }

    int order() const { return k_; }
    const Rational &coeff(int i) const { return c_[i]; }
    Rational &coeff(int i) { return c_[i]; }

    bool is_zero() const {
        for (const auto &c : c_)
            if (!c.is_zero())
                return false;
        return true;
    }
    bool is_unit() const { return k_ > 0 && !c_[0].is_zero(); }

    HSeries operator-() const {
        HSeries r(k_);
        for (int i = 0; i < k_; ++i)
            r.c_[i] = -c_[i];
        return r;
    }
    HSeries &operator+=(const HSeries &o) {
        check(o);
        for (int i = 0; i < k_; ++i)
            c_[i] += o.c_[i];
        return *this;
    }
    HSeries &operator-=(const HSeries &o) {
        check(o);
        for (int i = 0; i < k_; ++i)
            c_[i] -= o.c_[i];
        return *this;
    }
    friend HSeries operator+(HSeries a, const HSeries &b) { return a += b; }
    friend HSeries operator-(HSeries a, const HSeries &b) { return a -= b; }

    friend HSeries operator*(const HSeries &a, const HSeries &b) {
        a.check(b);
        HSeries r(a.k_);
        for (int i = 0; i < a.k_; ++i) {
            if (a.c_[i].is_zero())
                continue;
            for (int j = 0; j + i < a.k_; ++j) {
                if (b.c_[j].is_zero())
                    continue;
                r.c_[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return r;
    }
    HSeries &operator*=(const HSeries &o) { return *this = *this * o; }

    HSeries operator*(const Rational &s) const {
        HSeries r(k_);
        for (int i = 0; i < k_; ++i)
            r.c_[i] = c_[i] * s;
        return r;
    }

    // Multiplication by a pure power of h (shift), truncated at h^K.
    HSeries shift_h(int power) const {
        HSeries r(k_);
        for (int i = 0; i + power < k_; ++i)
            r.c_[i + power] = c_[i];
        return r;
    }

    // Inverse of a unit series (coeff(0) != 0).
    HSeries inv() const {
        if (!is_unit())
            throw std::domain_error("HSeries: inverse of a non-unit");
        HSeries r(k_);
        Rational a0 = c_[0].inv();
        r.c_[0] = a0;
        for (int i = 1; i < k_; ++i) {
            Rational acc;
            for (int j = 1; j <= i; ++j)
                acc += c_[j] * r.c_[i - j];
            r.c_[i] = -(acc * a0);
        }
        return r;
    }

    friend bool operator==(const HSeries &a, const HSeries &b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const HSeries &a, const HSeries &b) {
        return !(a == b);
    }

    // Canonical text: coefficients low-to-high joined by ';'.
    std::string str() const {
        std::string s;
        for (int i = 0; i < k_; ++i) {
            if (i)
                s += ';';
            s += c_[i].str();
        }
        return s;
    }

  private:
    void check(const HSeries &o) const {
        if (k_ != o.k_)
            throw std::logic_error("HSeries: truncation order mismatch");
    }
    int k_;
    std::vector<Rational> c_;
};

// exp(c*h) truncated at h^K
inline HSeries exp_h(int k, const Rational &c) {
    HSeries s(k);
    Rational term(1);
    for (int i = 0; i < k; ++i) {
        s.coeff(i) = term;
        term = term * c / Rational(i + 1);
    }
    return s;
}

} // namespace qve
