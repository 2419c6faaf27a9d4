#pragma once

#include "qve/hseries.hpp"
#include "qve/rational.hpp"
#include "qve/spectral.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qve {

// Runtime switch between the OpenMP product kernel and the serial
// reference; the two must agree entry-for-entry (tested).
inline bool &tensor_parallel_flag() {
    static bool on = true;
    return on;
}

using MultiIndex = std::uint64_t;

inline MultiIndex mi_encode(const std::vector<int> &digits, int N) {
    MultiIndex m = 0;
    for (int d : digits) {
        if (d < 1 || d > N)
            throw std::logic_error("multi-index digit out of range");
        m = m * (MultiIndex)N + (MultiIndex)(d - 1);
    }
    return m;
}

inline std::vector<int> mi_decode(MultiIndex m, int N, int n) {
    std::vector<int> d(n);
    for (int k = n - 1; k >= 0; --k) {
        d[k] = (int)(m % (MultiIndex)N) + 1;
        m /= (MultiIndex)N;
    }
    return d;
}

// Sparse operator on (C^N)^{ot n} over an exact scalar ring S.
// Multi-indices are encoded base N, factor 1 most significant.
template <typename S> struct SparseOperator {
    int N = 0;
    int n = 0;
    std::map<std::pair<MultiIndex, MultiIndex>, S> entries;

    SparseOperator() = default;
    SparseOperator(int N_, int n_) : N(N_), n(n_) {}

    MultiIndex dim() const {
        MultiIndex d = 1;
        for (int k = 0; k < n; ++k)
            d *= (MultiIndex)N;
        return d;
    }

    void add(MultiIndex r, MultiIndex c, const S &v) {
        if (v.is_zero())
            return;
        auto key = std::make_pair(r, c);
        auto it = entries.find(key);
        if (it == entries.end()) {
            entries.emplace(key, v);
        } else {
            it->second += v;
            if (it->second.is_zero())
                entries.erase(it);
        }
    }

    bool is_zero() const { return entries.empty(); }

    friend SparseOperator operator+(const SparseOperator &a,
                                    const SparseOperator &b) {
        a.check(b);
        SparseOperator r = a;
        for (const auto &kv : b.entries)
            r.add(kv.first.first, kv.first.second, kv.second);
        return r;
    }
    friend SparseOperator operator-(const SparseOperator &a,
                                    const SparseOperator &b) {
        a.check(b);
        SparseOperator r = a;
        for (const auto &kv : b.entries)
            r.add(kv.first.first, kv.first.second, neg(kv.second));
        return r;
    }

    template <typename T> SparseOperator scaled(const T &c) const {
        SparseOperator r(N, n);
        for (const auto &kv : entries) {
            S v = kv.second * c;
            if (!v.is_zero())
                r.entries.emplace(kv.first, v);
        }
        return r;
    }

    void check(const SparseOperator &o) const {
        if (N != o.N || n != o.n)
            throw std::logic_error("SparseOperator: shape mismatch");
    }

    static S neg(const S &v) { return -v; }
};

namespace detail {

template <typename S>
using RowTable =
    std::map<MultiIndex, std::vector<std::pair<MultiIndex, const S *>>>;

template <typename S> RowTable<S> rows_of(const SparseOperator<S> &a) {
    RowTable<S> t;
    for (const auto &kv : a.entries)
        t[kv.first.first].push_back({kv.first.second, &kv.second});
    return t;
}

template <typename S>
std::map<MultiIndex, S>
product_row(const std::vector<std::pair<MultiIndex, const S *>> &arow,
            const RowTable<S> &brows) {
    std::map<MultiIndex, S> acc;
    for (const auto &ae : arow) {
        auto bit = brows.find(ae.first);
        if (bit == brows.end())
            continue;
        for (const auto &be : bit->second) {
            S v = (*ae.second) * (*be.second);
            if (v.is_zero())
                continue;
            auto it = acc.find(be.first);
            if (it == acc.end()) {
                acc.emplace(be.first, std::move(v));
            } else {
                it->second += v;
                if (it->second.is_zero())
                    acc.erase(it);
            }
        }
    }
    return acc;
}

} // namespace detail

// Serial reference product.
template <typename S>
SparseOperator<S> mul_serial(const SparseOperator<S> &a,
                             const SparseOperator<S> &b) {
    a.check(b);
    auto brows = detail::rows_of(b);
    SparseOperator<S> r(a.N, a.n);
    auto arows = detail::rows_of(a);
    for (const auto &ar : arows) {
        auto row = detail::product_row(ar.second, brows);
        for (auto &kv : row)
            r.entries.emplace(std::make_pair(ar.first, kv.first),
                              std::move(kv.second));
    }
    return r;
}

// OpenMP product, parallel over row blocks of the left factor. Rows are
// independent, so the result is schedule-invariant and identical to the
// serial reference.
template <typename S>
SparseOperator<S> mul_parallel(const SparseOperator<S> &a,
                               const SparseOperator<S> &b) {
    a.check(b);
    auto brows = detail::rows_of(b);
    auto arows = detail::rows_of(a);
    std::vector<MultiIndex> keys;
    std::vector<const std::vector<std::pair<MultiIndex, const S *>> *> rows;
    keys.reserve(arows.size());
    for (const auto &ar : arows) {
        keys.push_back(ar.first);
        rows.push_back(&ar.second);
    }
    std::vector<std::map<MultiIndex, S>> out(keys.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < (long)keys.size(); ++i)
        out[i] = detail::product_row(*rows[i], brows);
    SparseOperator<S> r(a.N, a.n);
    for (size_t i = 0; i < keys.size(); ++i)
        for (auto &kv : out[i])
            r.entries.emplace(std::make_pair(keys[i], kv.first),
                              std::move(kv.second));
    return r;
}

template <typename S>
SparseOperator<S> operator*(const SparseOperator<S> &a,
                            const SparseOperator<S> &b) {
    return tensor_parallel_flag() ? mul_parallel(a, b) : mul_serial(a, b);
}

template <typename S> SparseOperator<S> identity_op(int N, int n, const S &one) {
    SparseOperator<S> r(N, n);
    MultiIndex d = r.dim();
    for (MultiIndex i = 0; i < d; ++i)
        r.entries.emplace(std::make_pair(i, i), one);
    return r;
}

// Matrix unit e_{ij} on a single factor.
template <typename S> SparseOperator<S> matrix_unit(int N, int i, int j, const S &one) {
    SparseOperator<S> r(N, 1);
    r.entries.emplace(std::make_pair((MultiIndex)(i - 1), (MultiIndex)(j - 1)),
                      one);
    return r;
}

// Acts as op on the listed factors, identity elsewhere.
template <typename S>
SparseOperator<S> embed(const SparseOperator<S> &op,
                        const std::vector<int> &positions, int n) {
    if ((int)positions.size() != op.n)
        throw std::logic_error("embed: position count mismatch");
    std::vector<bool> used(n + 1, false);
    for (int p : positions) {
        if (p < 1 || p > n || used[p])
            throw std::logic_error("embed: duplicate or out-of-range position");
        used[p] = true;
    }
    int N = op.N;
    std::vector<int> free_pos;
    for (int p = 1; p <= n; ++p)
        if (!used[p])
            free_pos.push_back(p);
    MultiIndex free_dim = 1;
    for (size_t k = 0; k < free_pos.size(); ++k)
        free_dim *= (MultiIndex)N;

    SparseOperator<S> r(N, n);
    std::vector<int> row(n), col(n);
    for (const auto &kv : op.entries) {
        auto rd = mi_decode(kv.first.first, N, op.n);
        auto cd = mi_decode(kv.first.second, N, op.n);
        for (MultiIndex f = 0; f < free_dim; ++f) {
            auto fd = mi_decode(f, N, (int)free_pos.size());
            for (int k = 0; k < op.n; ++k) {
                row[positions[k] - 1] = rd[k];
                col[positions[k] - 1] = cd[k];
            }
            for (size_t k = 0; k < free_pos.size(); ++k) {
                row[free_pos[k] - 1] = fd[k];
                col[free_pos[k] - 1] = fd[k];
            }
            r.entries.emplace(
                std::make_pair(mi_encode(row, N), mi_encode(col, N)),
                kv.second);
        }
    }
    return r;
}

// Contracts equal row/column indices over the subset; the result acts on
// the remaining factors in their original order.
template <typename S>
SparseOperator<S> partial_trace(const SparseOperator<S> &op,
                                const std::vector<int> &subset) {
    std::vector<bool> traced(op.n + 1, false);
    for (int p : subset) {
        if (p < 1 || p > op.n)
            throw std::logic_error("partial_trace: factor out of range");
        traced[p] = true;
    }
    std::vector<int> keep;
    for (int p = 1; p <= op.n; ++p)
        if (!traced[p])
            keep.push_back(p);
    SparseOperator<S> r(op.N, (int)keep.size());
    for (const auto &kv : op.entries) {
        auto rd = mi_decode(kv.first.first, op.N, op.n);
        auto cd = mi_decode(kv.first.second, op.N, op.n);
        bool diag = true;
        for (int p : subset)
            if (rd[p - 1] != cd[p - 1]) {
                diag = false;
                break;
            }
        if (!diag)
            continue;
        std::vector<int> rr, cc;
        for (int p : keep) {
            rr.push_back(rd[p - 1]);
            cc.push_back(cd[p - 1]);
        }
        r.add(mi_encode(rr, op.N), mi_encode(cc, op.N), kv.second);
    }
    return r;
}

// Swaps the i-th row/column digit in every entry key.
template <typename S>
SparseOperator<S> transpose_factor(const SparseOperator<S> &op, int i) {
    if (i < 1 || i > op.n)
        throw std::logic_error("transpose_factor: factor out of range");
    SparseOperator<S> r(op.N, op.n);
    for (const auto &kv : op.entries) {
        auto rd = mi_decode(kv.first.first, op.N, op.n);
        auto cd = mi_decode(kv.first.second, op.N, op.n);
        std::swap(rd[i - 1], cd[i - 1]);
        r.add(mi_encode(rd, op.N), mi_encode(cd, op.N), kv.second);
    }
    return r;
}

// Classical factor-permuting operator: basis vector with digits d goes to
// the vector with digits d' where d'[p(k)] = d[k].
template <typename S>
SparseOperator<S> permutation_op(int N, const std::vector<int> &perm,
                                 const S &one) {
    int n = (int)perm.size();
    SparseOperator<S> r(N, n);
    MultiIndex d = 1;
    for (int k = 0; k < n; ++k)
        d *= (MultiIndex)N;
    for (MultiIndex c = 0; c < d; ++c) {
        auto cd = mi_decode(c, N, n);
        std::vector<int> rd(n);
        for (int k = 0; k < n; ++k)
            rd[perm[k] - 1] = cd[k];
        r.entries.emplace(std::make_pair(mi_encode(rd, N), c), one);
    }
    return r;
}

// h-deformed transposition on adjacent factors (k, k+1) of n, over HSeries:
// fixes equal digits, swaps unequal ones with weight e^{+-h/2}.
inline SparseOperator<HSeries> h_transposition(int N, int n, int k, int K) {
    SparseOperator<HSeries> r(N, n);
    HSeries ep = exp_h(K, Rational(1, 2));
    HSeries em = exp_h(K, Rational(-1, 2));
    MultiIndex d = 1;
    for (int t = 0; t < n; ++t)
        d *= (MultiIndex)N;
    for (MultiIndex c = 0; c < d; ++c) {
        auto cd = mi_decode(c, N, n);
        int a = cd[k - 1], b = cd[k];
        if (a == b) {
            r.add(c, c, HSeries(K, Rational(1)));
        } else {
            std::vector<int> rd = cd;
            std::swap(rd[k - 1], rd[k]);
            // vector (a,b) with a<b picks up e^{h/2}
            r.add(mi_encode(rd, N), c, a < b ? ep : em);
        }
    }
    return r;
}

// Decompose p into adjacent transpositions (bubble sort, deterministic).
inline std::vector<int> adjacent_decomposition(std::vector<int> p) {
    std::vector<int> swaps;
    int n = (int)p.size();
    for (bool moved = true; moved;) {
        moved = false;
        for (int k = 0; k + 1 < n; ++k) {
            if (p[k] > p[k + 1]) {
                std::swap(p[k], p[k + 1]);
                swaps.push_back(k + 1);
                moved = true;
            }
        }
    }
    return swaps;
}

// Image of the permutation under the S_n action generated by the
// h-permutation operator on adjacent factors.
inline SparseOperator<HSeries> h_permutation_op(int N, const std::vector<int> &p,
                                                int K) {
    int n = (int)p.size();
    auto r = identity_op(N, n, HSeries(K, Rational(1)));
    // bubble decomposition sorts p, so p itself is the reversed swap word;
    // build the operator by left-multiplying along it
    auto swaps = adjacent_decomposition(p);
    for (int k : swaps)
        r = h_transposition(N, n, k, K) * r;
    return r;
}

enum class SymKind { Sym, Antisym, HAntisym };

inline void all_permutations(int n, std::vector<std::vector<int>> &out) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i)
        p[i] = i + 1;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

inline int perm_sign(const std::vector<int> &p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j])
                s = -s;
    return s;
}

// Normalized symmetrizer H_(n), anti-symmetrizer A_(n) or h-deformed
// anti-symmetrizer A^h_(n) on (C^N)^{ot n}, over HSeries.
inline SparseOperator<HSeries> symmetrizer(int N, int n, SymKind kind, int K) {
    std::vector<std::vector<int>> perms;
    all_permutations(n, perms);
    Rational norm = factorial(n).inv();
    SparseOperator<HSeries> acc(N, n);
    for (const auto &p : perms) {
        SparseOperator<HSeries> term =
            kind == SymKind::HAntisym
                ? h_permutation_op(N, p, K)
                : permutation_op(N, p, HSeries(K, Rational(1)));
        Rational c = norm;
        if (kind != SymKind::Sym && perm_sign(p) < 0)
            c = -c;
        acc = acc + term.scaled(c);
    }
    return acc;
}

// Lift an HSeries operator to SpectralSeries scalars in a context.
inline SparseOperator<SpectralSeries> lift(const SparseOperator<HSeries> &op,
                                           const Ctx &ctx) {
    SparseOperator<SpectralSeries> r(op.N, op.n);
    for (const auto &kv : op.entries)
        r.entries.emplace(kv.first, SpectralSeries(ctx, kv.second));
    return r;
}

template <typename S>
SparseOperator<S> full_trace_keep(const SparseOperator<S> &op) {
    std::vector<int> all;
    for (int p = 1; p <= op.n; ++p)
        all.push_back(p);
    return partial_trace(op, all);
}

} // namespace qve
