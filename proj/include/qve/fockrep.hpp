#pragma once

#include "qve/qalgebra.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace qve {

// Monomial in x_1..x_N, y_1..y_N (commuting for sign +, exterior for
// sign -) and commuting t_1, t_2, ...
struct FockMonomial {
    std::vector<int> x, y;
    std::map<int, int> t;

    friend bool operator<(const FockMonomial &a, const FockMonomial &b) {
        return std::tie(a.x, a.y, a.t) < std::tie(b.x, b.y, b.t);
    }
    friend bool operator==(const FockMonomial &a, const FockMonomial &b) {
        return std::tie(a.x, a.y, a.t) == std::tie(b.x, b.y, b.t);
    }
};

struct FockElement {
    std::map<FockMonomial, HSeries> terms;

    bool is_zero() const { return terms.empty(); }
    void add(const FockMonomial &m, const HSeries &c) {
        if (c.is_zero())
            return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }
    FockElement &operator+=(const FockElement &o) {
        for (const auto &kv : o.terms)
            add(kv.first, kv.second);
        return *this;
    }
    FockElement operator-() const {
        FockElement r = *this;
        for (auto &kv : r.terms)
            kv.second = -kv.second;
        return r;
    }
    friend FockElement operator-(FockElement a, const FockElement &b) {
        return a += -b;
    }
    friend bool operator==(const FockElement &a, const FockElement &b) {
        return a.terms == b.terms;
    }
};

inline FockElement fock_one(int N, int K) {
    FockElement e;
    FockMonomial m;
    m.x.assign(N, 0);
    m.y.assign(N, 0);
    e.add(m, HSeries(K, Rational(1)));
    return e;
}

// Left multiplication by x_i y_j t_r with the sign rules of the exterior
// model; `tshift` perturbs the action to t_{r+tshift} (negative control).
inline FockElement fock_act(const Truncation &tr, const Letter &g,
                            const FockElement &v, int tshift = 0) {
    FockElement out;
    for (const auto &kv : v.terms) {
        FockMonomial m = kv.first;
        HSeries c = kv.second;
        if (tr.sign < 0) {
            if (m.x[g.i - 1] || m.y[g.j - 1])
                continue;
            int par = 0;
            for (int k = 0; k < g.i - 1; ++k)
                par += m.x[k];
            for (int k = 0; k < g.j - 1; ++k)
                par += m.y[k];
            if (par & 1)
                c = -c;
        }
        m.x[g.i - 1] += 1;
        m.y[g.j - 1] += 1;
        m.t[g.r + tshift] += 1;
        out.add(m, c);
    }
    return out;
}

inline FockElement fock_eval_word(const Truncation &tr, const Word &w,
                                  const HSeries &coeff, int tshift = 0) {
    FockElement v = fock_one(tr.N, tr.K);
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        v = fock_act(tr, *it, v, tshift);
    FockElement out;
    for (const auto &kv : v.terms)
        out.add(kv.first, kv.second * coeff);
    return out;
}

// pi: a -> a . 1
inline FockElement fock_eval(const Truncation &tr, const State &s) {
    FockElement out;
    for (const auto &kv : s.terms)
        out += fock_eval_word(tr, kv.first, kv.second);
    return out;
}

struct FockReport {
    bool pass = true;
    std::string witness;
    long checked = 0;
};

// All monomials with x/y degree <= dmax and t-part drawn from words of
// total level <= lmax (these are exactly the images reachable in window).
std::vector<FockMonomial> fock_spanning_set(const Truncation &tr, int dmax,
                                            int lmax);

// Every coefficient-extracted defining relation annihilates the spanning
// set; tshift != 0 perturbs the action and must produce a witness.
FockReport check_rtt_on_fock(const Truncation &tr, int level_max, int dmax,
                             int tshift = 0);

} // namespace qve
