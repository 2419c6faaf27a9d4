#pragma once

#include "qve/hseries.hpp"
#include "qve/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace qve {

// One generator letter l^{(-r)}_{ij}; canonical order is lex on (r, i, j).
struct Letter {
    int r, i, j;
    friend bool operator<(const Letter &a, const Letter &b) {
        return std::tie(a.r, a.i, a.j) < std::tie(b.r, b.i, b.j);
    }
    friend bool operator==(const Letter &a, const Letter &b) {
        return std::tie(a.r, a.i, a.j) == std::tie(b.r, b.i, b.j);
    }
    friend bool operator>(const Letter &a, const Letter &b) { return b < a; }
};

using Word = std::vector<Letter>;

inline int word_level(const Word &w) {
    int l = 0;
    for (const auto &x : w)
        l += x.r;
    return l;
}
inline bool word_canonical(const Word &w) {
    for (size_t t = 0; t + 1 < w.size(); ++t)
        if (w[t + 1] < w[t])
            return false;
    return true;
}
std::string word_str(const Word &w);
Word word_parse(const std::string &s);

// Finite truncation window of the algebra.
struct Truncation {
    int N = 2;
    int sign = 1; // +1 / -1 selects the R-matrix normalization
    int K = 4;    // h-order
    int M = 6;    // max word length
    int L = 6;    // max level

    bool valid() const { return N >= 2 && (sign == 1 || sign == -1) && K >= 1 && M >= 0 && L >= M && L >= 0; }
    std::string str() const;
};

// Element of the truncated algebra: canonical words with HSeries
// coefficients. `overflow` records that some component left the window and
// was dropped, i.e. the value is exact only in the window quotient.
struct State {
    std::map<Word, HSeries> terms;
    bool overflow = false;

    bool is_zero() const { return terms.empty(); }
    void add(const Word &w, const HSeries &c) {
        if (c.is_zero())
            return;
        auto it = terms.find(w);
        if (it == terms.end()) {
            terms.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }
    State &operator+=(const State &o) {
        for (const auto &kv : o.terms)
            add(kv.first, kv.second);
        overflow = overflow || o.overflow;
        return *this;
    }
    State operator-() const {
        State r = *this;
        for (auto &kv : r.terms)
            kv.second = -kv.second;
        return r;
    }
    friend State operator+(State a, const State &b) { return a += b; }
    friend State operator-(State a, const State &b) { return a += -b; }
    State scaled(const HSeries &c) const {
        State r;
        r.overflow = overflow;
        for (const auto &kv : terms)
            r.add(kv.first, kv.second * c);
        return r;
    }
    friend bool operator==(const State &a, const State &b) {
        return a.terms == b.terms;
    }
};

inline State vacuum_state() { return State{}; }
inline State unit_state(int K) {
    State s;
    s.add(Word{}, HSeries(K, Rational(1)));
    return s;
}

// Sparse relation row: rational coefficients on (word, h-power) columns.
using Column = std::pair<Word, int>;
using RelRow = std::map<Column, Rational>;

struct PieceKey {
    int m, g;
    friend bool operator<(const PieceKey &a, const PieceKey &b) {
        return std::tie(a.m, a.g) < std::tie(b.m, b.g);
    }
};

// A graded piece after exact row reduction: the fixed column order, the
// canonical (free) columns and the rewrite of every pivot column.
struct Piece {
    std::vector<Column> columns;
    std::vector<int> pivots; // indices into columns
    std::map<int, std::vector<std::pair<int, Rational>>> rewrite;
    int rank = 0;
};

struct RewriteTerm {
    Word w; // sorted two-letter word
    int k;
    Rational c;
};

class BasisTable {
  public:
    Truncation tr;
    // adjacent-swap rules: unsorted pair (x > y) at h^0 -> canonical terms
    std::map<std::pair<Letter, Letter>, std::vector<RewriteTerm>> rw2;
    // fully reduced pieces kept for lookup-based reduction and cross-checks
    std::map<PieceKey, Piece> pieces;
    std::uint64_t hash = 0;

    const std::vector<RewriteTerm> &swap_rule(const Letter &x,
                                              const Letter &y) const;
};

// All letters for the truncation (r <= L).
std::vector<Letter> all_letters(const Truncation &tr);

// Canonical (non-decreasing) words of given length and level.
std::vector<Word> canonical_words(const Truncation &tr, int m, int level);
// All words of given length and level.
std::vector<Word> words_of(const Truncation &tr, int m, int level);

// Relation rows of the graded piece (m, g) of the defining-ideal quotient,
// every row homogeneous in (length, level - h-power).
std::vector<RelRow> generate_relations(const Truncation &tr, int m, int g);

// Exact reduced row echelon form over the fixed column order; sorted words
// are listed last so they survive as the canonical complement.
Piece reduce_piece(const Truncation &tr, int m, int g);

// Builds swap rules from the two-letter pieces plus fully reduced lookup
// pieces up to the given budget (word length <= lookup_m, level <= lookup_l).
BasisTable build_basis(const Truncation &tr, int lookup_m = 2, int lookup_l = -1);

// Canonical form of  coeff * w  (w arbitrary), by leftmost adjacent-swap
// rewriting; window overflow is recorded on the state.
State normal_form(const Word &w, const HSeries &coeff, const BasisTable &table);

// Same element reduced through the fully reduced piece tables; requires the
// needed pieces to exist (used as the independent reduction cross-check).
State normal_form_lookup(const Word &w, const HSeries &coeff,
                         const BasisTable &table, bool *covered = nullptr);

State multiply(const State &a, const State &b, const BasisTable &table);

// Left multiplication by a single letter (the L^+ coefficient action).
State letter_mul(const Letter &x, const State &s, const BasisTable &table);

} // namespace qve
