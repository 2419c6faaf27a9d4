#pragma once

#include "qve/hseries.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qve {

// Ordered spectral-variable context. The order is the expansion convention:
// a variable listed earlier is "large", everything after it (and h) is
// "small". Series built over different contexts never mix.
struct VarContext {
    std::vector<std::string> names;
    std::vector<int> depth; // positive-exponent expansion depth per variable
    int K = 1;              // h truncation order

    int index(const std::string &n) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == n)
                return (int)i;
        throw std::logic_error("VarContext: unknown variable '" + n + "'");
    }
    size_t size() const { return names.size(); }
};

using Ctx = std::shared_ptr<const VarContext>;

inline Ctx make_ctx(std::vector<std::string> names, std::vector<int> depth,
                    int k) {
    auto c = std::make_shared<VarContext>();
    c->names = std::move(names);
    c->depth = std::move(depth);
    c->K = k;
    return c;
}
inline Ctx make_ctx(std::vector<std::string> names, int depth, int k) {
    std::vector<int> d(names.size(), depth);
    return make_ctx(std::move(names), std::move(d), k);
}

// A term in a linear form: coefficient times a variable (idx >= 0) or times
// h (idx == -1).
struct LinTerm {
    Rational coef;
    int idx;
};

// Sparse Laurent-type series in the context variables with HSeries
// coefficients. Carries a per-variable exactness window [lo, hi]: stored
// terms inside the window are exact, anything outside hi was dropped by a
// truncating operation (and hi records that drop).
class SpectralSeries {
  public:
    static constexpr int kInf = std::numeric_limits<int>::max() / 4;

    SpectralSeries() = default;
    explicit SpectralSeries(Ctx ctx)
        : ctx_(std::move(ctx)), lo_(ctx_->size(), 0), hi_(ctx_->size(), kInf) {}
    SpectralSeries(Ctx ctx, const HSeries &c) : SpectralSeries(std::move(ctx)) {
        if (!c.is_zero())
            t_[std::vector<int>(ctx_->size(), 0)] = c;
    }
    SpectralSeries(Ctx ctx, const Rational &c)
        : SpectralSeries(std::move(ctx)) {
        if (!c.is_zero())
            t_[std::vector<int>(ctx_->size(), 0)] = HSeries(ctx_->K, c);
    }

    static SpectralSeries monomial(Ctx ctx, const std::vector<int> &e,
                                   const HSeries &c) {
        SpectralSeries s(std::move(ctx));
        if (!c.is_zero())
            s.t_[e] = c;
        s.refresh_lo();
        return s;
    }

    const Ctx &ctx() const { return ctx_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<std::vector<int>, HSeries> &terms() const { return t_; }
    int lo(int v) const { return lo_[v]; }
    int hi(int v) const { return hi_[v]; }

    HSeries coeff(const std::vector<int> &e) const {
        auto it = t_.find(e);
        return it == t_.end() ? HSeries(ctx_->K) : it->second;
    }

    void add_term(const std::vector<int> &e, const HSeries &c) {
        if (c.is_zero())
            return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero())
                t_.erase(it);
        }
    }

    SpectralSeries operator-() const {
        SpectralSeries r = *this;
        for (auto &kv : r.t_)
            kv.second = -kv.second;
        return r;
    }

    SpectralSeries &operator+=(const SpectralSeries &o) {
        return *this = *this + o;
    }
    SpectralSeries &operator-=(const SpectralSeries &o) {
        return *this = *this - o;
    }
    SpectralSeries &operator*=(const SpectralSeries &o) {
        return *this = *this * o;
    }

    friend SpectralSeries operator+(const SpectralSeries &a,
                                    const SpectralSeries &b) {
        a.check(b);
        SpectralSeries r = a;
        for (auto &kv : b.t_)
            r.add_term(kv.first, kv.second);
        for (size_t v = 0; v < r.hi_.size(); ++v)
            r.hi_[v] = std::min(a.hi_[v], b.hi_[v]);
        r.refresh_lo();
        return r;
    }
    friend SpectralSeries operator-(const SpectralSeries &a,
                                    const SpectralSeries &b) {
        return a + (-b);
    }

    friend SpectralSeries operator*(const SpectralSeries &a,
                                    const SpectralSeries &b) {
        a.check(b);
        SpectralSeries r(a.ctx_);
        size_t nv = a.ctx_->size();
        for (size_t v = 0; v < nv; ++v) {
            long h1 = sat_add(a.hi_[v], b.lo_[v]);
            long h2 = sat_add(b.hi_[v], a.lo_[v]);
            r.hi_[v] = (int)std::min((long)kInf, std::min(h1, h2));
        }
        std::vector<int> e(nv);
        for (const auto &ka : a.t_) {
            for (const auto &kb : b.t_) {
                bool inside = true;
                for (size_t v = 0; v < nv; ++v) {
                    e[v] = ka.first[v] + kb.first[v];
                    if (e[v] > r.hi_[v]) {
                        inside = false;
                        break;
                    }
                }
                if (!inside)
                    continue;
                r.add_term(e, ka.second * kb.second);
            }
        }
        r.refresh_lo();
        return r;
    }

    SpectralSeries operator*(const HSeries &c) const {
        SpectralSeries r(ctx_);
        r.hi_ = hi_;
        for (const auto &kv : t_)
            r.add_term(kv.first, kv.second * c);
        r.refresh_lo();
        return r;
    }
    SpectralSeries operator*(const Rational &c) const {
        return *this * HSeries(ctx_->K, c);
    }

    // Exponent shift by a monomial (no truncation; window shifts along).
    SpectralSeries shifted(const std::vector<int> &d) const {
        SpectralSeries r(ctx_);
        for (size_t v = 0; v < hi_.size(); ++v)
            r.hi_[v] = (int)std::min((long)kInf, sat_add(hi_[v], d[v]));
        for (const auto &kv : t_) {
            std::vector<int> e = kv.first;
            for (size_t v = 0; v < e.size(); ++v)
                e[v] += d[v];
            r.t_[e] = kv.second;
        }
        r.refresh_lo();
        return r;
    }

    // Clamp the exactness window (recording an explicit truncation) and
    // drop terms outside it.
    void clamp_hi(int v, int bound) {
        hi_[v] = std::min(hi_[v], bound);
        for (auto it = t_.begin(); it != t_.end();) {
            if (it->first[v] > hi_[v])
                it = t_.erase(it);
            else
                ++it;
        }
    }

    friend bool operator==(const SpectralSeries &a, const SpectralSeries &b) {
        a.check(b);
        return a.t_ == b.t_;
    }
    friend bool operator!=(const SpectralSeries &a, const SpectralSeries &b) {
        return !(a == b);
    }

    // Re-index into a context with the same K whose name set contains this
    // one's. Pure data plumbing: exponents permute, nothing re-expands.
    SpectralSeries transplant(const Ctx &to) const {
        if (to->K != ctx_->K)
            throw std::logic_error("transplant: K mismatch");
        std::vector<int> where(ctx_->size());
        for (size_t v = 0; v < ctx_->size(); ++v)
            where[v] = to->index(ctx_->names[v]);
        SpectralSeries r(to);
        for (size_t v = 0; v < ctx_->size(); ++v) {
            r.lo_[where[v]] = lo_[v];
            r.hi_[where[v]] = hi_[v];
        }
        for (const auto &kv : t_) {
            std::vector<int> e(to->size(), 0);
            for (size_t v = 0; v < ctx_->size(); ++v)
                e[where[v]] = kv.first[v];
            r.t_[e] = kv.second;
        }
        return r;
    }

    // Canonical text: one line per term, exponents space-separated, then
    // the HSeries coefficient.
    std::string str() const {
        std::string s;
        for (const auto &kv : t_) {
            for (int e : kv.first) {
                s += std::to_string(e);
                s += ' ';
            }
            s += ": " + kv.second.str() + "\n";
        }
        return s;
    }

    void refresh_lo() {
        size_t nv = lo_.size();
        for (size_t v = 0; v < nv; ++v)
            lo_[v] = t_.empty() ? 0 : kInf;
        for (const auto &kv : t_)
            for (size_t v = 0; v < nv; ++v)
                lo_[v] = std::min(lo_[v], kv.first[v]);
        if (!t_.empty())
            for (size_t v = 0; v < nv; ++v)
                if (lo_[v] == kInf)
                    lo_[v] = 0;
    }

  private:
    static long sat_add(long a, long b) {
        if (a >= kInf || b >= kInf)
            return kInf;
        return a + b;
    }
    void check(const SpectralSeries &o) const {
        if (ctx_ != o.ctx_ && !(ctx_ && o.ctx_ && ctx_->names == o.ctx_->names &&
                                ctx_->K == o.ctx_->K))
            throw std::logic_error("SpectralSeries: variable-list mismatch");
    }

    Ctx ctx_;
    std::map<std::vector<int>, HSeries> t_;
    std::vector<int> lo_, hi_;
};

// Polynomial built from a linear form  sum of terms (coef * var | coef * h)
// plus a rational constant.
inline SpectralSeries linear_poly(const Ctx &ctx, const Rational &cst,
                                  const std::vector<LinTerm> &terms) {
    SpectralSeries s(ctx, cst);
    for (const auto &t : terms) {
        if (t.coef.is_zero())
            continue;
        std::vector<int> e(ctx->size(), 0);
        HSeries c(ctx->K, t.coef);
        if (t.idx < 0)
            c = c.shift_h(1);
        else
            e[t.idx] = 1;
        s.add_term(e, c);
    }
    s.refresh_lo();
    return s;
}

// (a * x_target + B)^e for integer e, where B is a linear form in strictly
// later variables and h. For e < 0 this is the geometric expansion in
// nonnegative powers of the later variables, truncated at the context
// depths and at h^K; negative powers appear only in the target variable.
inline SpectralSeries pow_linear(const Ctx &ctx, int target, const Rational &a,
                                 const std::vector<LinTerm> &others, long e) {
    if (a.is_zero())
        throw std::domain_error("pow_linear: zero leading coefficient");
    for (const auto &t : others)
        if (t.idx >= 0 && t.idx <= target && !t.coef.is_zero())
            throw std::logic_error(
                "pow_linear: expansion variable is not the earliest listed");
    SpectralSeries b = linear_poly(ctx, Rational(0), others);

    if (e >= 0) {
        // plain polynomial power
        std::vector<int> xt(ctx->size(), 0);
        xt[target] = 1;
        SpectralSeries base =
            SpectralSeries::monomial(ctx, xt, HSeries(ctx->K, a)) + b;
        SpectralSeries r(ctx, Rational(1));
        for (long i = 0; i < e; ++i)
            r = r * base;
        return r;
    }

    // Only variables occurring in B develop infinite tails mod h^K; those
    // are the ones clipped at the context depth. The target variable's
    // negative tail is finite at every h-order and stays exact.
    std::vector<int> small;
    for (const auto &t : others)
        if (t.idx >= 0 && !t.coef.is_zero())
            small.push_back(t.idx);
    auto clip = [&](SpectralSeries &s) {
        for (int v : small)
            s.clamp_hi(v, ctx->depth[v]);
    };
    // (a x + B)^e = sum_{t>=0} binom(e,t) a^{e-t} x^{e-t} B^t
    SpectralSeries r(ctx);
    clip(r);
    SpectralSeries bpow(ctx, Rational(1));
    for (long t = 0;; ++t) {
        if (t > 0) {
            bpow = bpow * b;
            clip(bpow);
            if (bpow.is_zero())
                break;
        }
        std::vector<int> shift(ctx->size(), 0);
        shift[target] = (int)(e - t);
        SpectralSeries term =
            (bpow * (binomial(e, t) * a.pow(e - t))).shifted(shift);
        for (const auto &kv : term.terms())
            r.add_term(kv.first, kv.second);
        if (b.is_zero())
            break;
    }
    r.refresh_lo();
    return r;
}

// Geometric expansion of (a*target + B)^{-1}; the §-convention entry point.
inline SpectralSeries expand_inverse_linear(const Ctx &ctx, int target,
                                            const Rational &a,
                                            const std::vector<LinTerm> &others) {
    return pow_linear(ctx, target, a, others, -1);
}

// Inverse of a linear form with a nonzero rational constant term: everything
// (variables and h) is small, so the result has nonnegative exponents only.
inline SpectralSeries invert_const_linear(const Ctx &ctx, const Rational &cst,
                                          const std::vector<LinTerm> &terms) {
    if (cst.is_zero())
        throw std::domain_error("invert_const_linear: zero constant term");
    SpectralSeries b = linear_poly(ctx, Rational(0), terms);
    std::vector<int> small;
    for (const auto &t : terms)
        if (t.idx >= 0 && !t.coef.is_zero())
            small.push_back(t.idx);
    auto clip = [&](SpectralSeries &s) {
        for (int v : small)
            s.clamp_hi(v, ctx->depth[v]);
    };
    SpectralSeries r(ctx);
    clip(r);
    Rational ainv = cst.inv();
    SpectralSeries acc(ctx, ainv);
    while (!acc.is_zero()) {
        for (const auto &kv : acc.terms())
            r.add_term(kv.first, kv.second);
        acc = acc * b * (-ainv);
        clip(acc);
        if (b.is_zero())
            break;
    }
    r.refresh_lo();
    return r;
}

// Exact evaluation at a rational point: var := c.
inline SpectralSeries substitute_rational(const SpectralSeries &s, int var,
                                          const Rational &c) {
    SpectralSeries r(s.ctx());
    for (const auto &kv : s.terms()) {
        int e = kv.first[var];
        if (e < 0 && c.is_zero())
            throw std::domain_error("substitute_rational: pole at zero");
        std::vector<int> en = kv.first;
        en[var] = 0;
        r.add_term(en, kv.second * c.pow(e));
    }
    r.refresh_lo();
    return r;
}

// Taylor re-expansion substitution  var := main + sum(others),
// where `main` is an earlier-or-equal ("large") variable and the others
// (later variables, h) are small. Implements z + c*h and z + u_i shifts.
inline SpectralSeries substitute_linear(const SpectralSeries &s, int var,
                                        int main,
                                        const std::vector<LinTerm> &others) {
    const Ctx &ctx = s.ctx();
    SpectralSeries b = linear_poly(ctx, Rational(0), others);
    std::vector<int> small;
    for (const auto &t : others)
        if (t.idx >= 0 && !t.coef.is_zero())
            small.push_back(t.idx);
    auto clip = [&](SpectralSeries &x) {
        for (int v : small)
            x.clamp_hi(v, ctx->depth[v]);
    };
    SpectralSeries r(ctx);
    clip(r);
    for (const auto &kv : s.terms()) {
        int e = kv.first[var];
        std::vector<int> base = kv.first;
        base[var] = 0;
        // (main + B)^e = sum_t binom(e,t) main^(e-t) B^t
        SpectralSeries bpow(ctx, Rational(1));
        for (long t = 0;; ++t) {
            if (t > 0) {
                bpow = bpow * b;
                clip(bpow);
                if (bpow.is_zero())
                    break;
            }
            std::vector<int> shift = base;
            shift[main] += (int)(e - t);
            SpectralSeries term =
                (bpow * binomial(e, t) * kv.second).shifted(shift);
            for (const auto &tkv : term.terms())
                r.add_term(tkv.first, tkv.second);
            if (e >= 0 && t >= e)
                break;
            if (b.is_zero())
                break;
        }
    }
    r.refresh_lo();
    return r;
}

} // namespace qve
