#include "qve/qalgebra.hpp"

#include "qve/rmatrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qve {

std::string word_str(const Word &w) {
    std::string s;
    for (size_t t = 0; t < w.size(); ++t) {
        if (t)
            s += ',';
        s += std::to_string(w[t].r) + "." + std::to_string(w[t].i) + "." +
             std::to_string(w[t].j);
    }
    return s.empty() ? "1" : s;
}

Word word_parse(const std::string &s) {
    Word w;
    if (s == "1")
        return w;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Letter x{};
        if (sscanf(item.c_str(), "%d.%d.%d", &x.r, &x.i, &x.j) != 3)
            throw std::runtime_error("word_parse: bad letter '" + item + "'");
        w.push_back(x);
    }
    return w;
}

std::string Truncation::str() const {
    return "N=" + std::to_string(N) + " sign=" + std::to_string(sign) +
           " K=" + std::to_string(K) + " M=" + std::to_string(M) +
           " L=" + std::to_string(L);
}

std::vector<Letter> all_letters(const Truncation &tr) {
    std::vector<Letter> out;
    for (int r = 1; r <= tr.L; ++r)
        for (int i = 1; i <= tr.N; ++i)
            for (int j = 1; j <= tr.N; ++j)
                out.push_back({r, i, j});
    return out;
}

static void words_rec(const Truncation &tr, int m, int level, bool canonical,
                      Word &cur, std::vector<Word> &out) {
    if ((int)cur.size() == m) {
        if (level == 0)
            out.push_back(cur);
        return;
    }
    int rest = m - (int)cur.size();
    for (int r = 1; r + (rest - 1) <= level; ++r)
        for (int i = 1; i <= tr.N; ++i)
            for (int j = 1; j <= tr.N; ++j) {
                Letter x{r, i, j};
                if (canonical && !cur.empty() && x < cur.back())
                    continue;
                cur.push_back(x);
                words_rec(tr, m, level - r, canonical, cur, out);
                cur.pop_back();
            }
}

std::vector<Word> canonical_words(const Truncation &tr, int m, int level) {
    std::vector<Word> out;
    Word cur;
    if (m == 0) {
        if (level == 0)
            out.push_back(cur);
        return out;
    }
    words_rec(tr, m, level, true, cur, out);
    return out;
}

std::vector<Word> words_of(const Truncation &tr, int m, int level) {
    std::vector<Word> out;
    Word cur;
    if (m == 0) {
        if (level == 0)
            out.push_back(cur);
        return out;
    }
    words_rec(tr, m, level, false, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// Two-letter relation rows.
//
// The defining exchange relation, cleared of denominators, reads
//   (u - v - s h) (( -u + v) I - h P) L1(u) L2(v)
//     = (-u + v - s h) L2(v) L1(u) ((u - v) I - h P)
// with s = +-1 the normalization sign. Every (matrix entry, u^a v^b)
// coefficient is one row, homogeneous in (length, level - h-power).

namespace {

struct Row2Key {
    int i1, i2, j1, j2, a, b;
    friend bool operator<(const Row2Key &x, const Row2Key &y) {
        return std::tie(x.i1, x.i2, x.j1, x.j2, x.a, x.b) <
               std::tie(y.i1, y.i2, y.j1, y.j2, y.a, y.b);
    }
};

// rows indexed by (entry, a, b); terms on (two-letter word, h-power)
std::map<Row2Key, RelRow> base_rows_2(const Truncation &tr) {
    int N = tr.N, K = tr.K, L = tr.L;
    Ctx ctx = make_ctx({"u", "v"}, L + 2, K);
    SpectralSeries u = linear_poly(ctx, Rational(0), {{Rational(1), 0}});
    SpectralSeries v = linear_poly(ctx, Rational(0), {{Rational(1), 1}});
    SpectralSeries h = sseries_h(ctx);
    SpectralSeries sgn(ctx, Rational(tr.sign));

    SOp I = sop_identity(ctx, N);
    SOp P = sop_permutation(ctx, N);
    SOp lhs_pre =
        (I.scaled(v - u) - P.scaled(h)).scaled(u - v - h * sgn);
    SOp rhs_pre =
        (I.scaled(u - v) - P.scaled(h)).scaled(v - u - h * sgn);

    std::map<Row2Key, RelRow> rows;
    auto scatter = [&](const SOp &pre, bool left) {
        for (const auto &kv : pre.entries) {
            auto rd = mi_decode(kv.first.first, N, 2);
            auto cd = mi_decode(kv.first.second, N, 2);
            for (const auto &term : kv.second.terms()) {
                int a1 = term.first[0], b1 = term.first[1];
                const HSeries &q = term.second;
                for (int r1 = 1; r1 + 1 <= L; ++r1)
                    for (int r2 = 1; r1 + r2 <= L; ++r2)
                        for (int k = 0; k < tr.K; ++k) {
                            if (q.coeff(k).is_zero())
                                continue;
                            if (left) {
                                // pre * L1(u) L2(v): word from column indices
                                for (int j1 = 1; j1 <= N; ++j1)
                                    for (int j2 = 1; j2 <= N; ++j2) {
                                        Row2Key key{rd[0], rd[1], j1, j2,
                                                    a1 + r1 - 1, b1 + r2 - 1};
                                        Word w{{r1, cd[0], j1},
                                               {r2, cd[1], j2}};
                                        rows[key][{w, k}] += q.coeff(k);
                                    }
                            } else {
                                // L2(v) L1(u) * pre: word from row indices,
                                // v-letter written first
                                for (int i1 = 1; i1 <= N; ++i1)
                                    for (int i2 = 1; i2 <= N; ++i2) {
                                        Row2Key key{i1, i2, cd[0], cd[1],
                                                    a1 + r1 - 1, b1 + r2 - 1};
                                        Word w{{r2, i2, rd[1]},
                                               {r1, i1, rd[0]}};
                                        rows[key][{w, k}] -= q.coeff(k);
                                    }
                            }
                        }
            }
        }
    };
    scatter(lhs_pre, true);
    scatter(rhs_pre, false);
    for (auto it = rows.begin(); it != rows.end();) {
        for (auto jt = it->second.begin(); jt != it->second.end();)
            jt = jt->second.is_zero() ? it->second.erase(jt) : std::next(jt);
        it = it->second.empty() ? rows.erase(it) : std::next(it);
    }
    return rows;
}

const std::map<Row2Key, RelRow> &cached_rows_2(const Truncation &tr) {
    static std::map<std::string, std::map<Row2Key, RelRow>> cache;
    auto key = tr.str();
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, base_rows_2(tr)).first;
    return it->second;
}

// shift a row by h^j, dropping columns outside (K, L)
RelRow shift_row(const RelRow &row, int j, const Truncation &tr) {
    RelRow out;
    for (const auto &kv : row) {
        int k = kv.first.second + j;
        if (k >= tr.K)
            continue;
        if (word_level(kv.first.first) > tr.L)
            continue;
        out[{kv.first.first, k}] += kv.second;
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

RelRow clip_row(const RelRow &row, const Truncation &tr) {
    return shift_row(row, 0, tr);
}

} // namespace

std::vector<RelRow> generate_relations(const Truncation &tr, int m, int g) {
    if (m < 2)
        return {};
    const auto &base = cached_rows_2(tr);
    std::vector<RelRow> out;
    if (m == 2) {
        for (const auto &kv : base) {
            int g2 = kv.first.a + kv.first.b;
            if (g2 < g)
                continue;
            RelRow r = shift_row(kv.second, g2 - g, tr);
            if (!r.empty())
                out.push_back(std::move(r));
        }
        return out;
    }
    // wrap two-letter rows with free words on both sides
    for (int p = 0; p + 2 <= m; ++p) {
        int q = m - 2 - p;
        for (int la = p; la <= g; ++la) {
            auto lefts = words_of(tr, p, la);
            if (lefts.empty())
                continue;
            for (int lb = q; la + lb <= g; ++lb) {
                auto rights = words_of(tr, q, lb);
                if (rights.empty())
                    continue;
                int g2 = g - la - lb;
                if (g2 < 0)
                    continue;
                for (const auto &kv : base) {
                    int gg = kv.first.a + kv.first.b;
                    if (gg < g2)
                        continue;
                    RelRow mid = shift_row(kv.second, gg - g2, tr);
                    if (mid.empty())
                        continue;
                    for (const auto &wl : lefts)
                        for (const auto &wr : rights) {
                            RelRow r;
                            for (const auto &t : mid) {
                                Word w = wl;
                                w.insert(w.end(), t.first.first.begin(),
                                         t.first.first.end());
                                w.insert(w.end(), wr.begin(), wr.end());
                                if (word_level(w) > tr.L)
                                    continue;
                                r[{w, t.first.second}] += t.second;
                            }
                            for (auto it = r.begin(); it != r.end();)
                                it = it->second.is_zero() ? r.erase(it)
                                                          : std::next(it);
                            if (!r.empty())
                                out.push_back(std::move(r));
                        }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact RREF per piece. Column order: unsorted words first (pivot side),
// then sorted; within a class by h-power then word.

namespace {

bool column_less(const Column &x, const Column &y) {
    bool sx = word_canonical(x.first), sy = word_canonical(y.first);
    if (sx != sy)
        return !sx; // unsorted first
    if (x.second != y.second)
        return x.second < y.second;
    return x.first < y.first;
}

} // namespace

Piece reduce_piece(const Truncation &tr, int m, int g) {
    Piece piece;
    for (int k = 0; k < tr.K; ++k) {
        int level = g + k;
        if (level < m || level > tr.L)
            continue;
        for (const auto &w : words_of(tr, m, level))
            piece.columns.push_back({w, k});
    }
    std::sort(piece.columns.begin(), piece.columns.end(), column_less);
    std::map<Column, int> colid;
    for (size_t c = 0; c < piece.columns.size(); ++c)
        colid[piece.columns[c]] = (int)c;

    auto rows = generate_relations(tr, m, g);
    // sparse Gauss-Jordan, fully reduced against ordered columns
    std::map<int, std::map<int, Rational>> reduced; // pivot -> row
    for (const auto &rel : rows) {
        std::map<int, Rational> row;
        for (const auto &t : rel)
            row[colid.at(t.first)] = t.second;
        // eliminate every pivot column present in the row; pivot rows are
        // kept fully reduced so each hit introduces free columns only
        for (bool again = true; again && !row.empty();) {
            again = false;
            for (const auto &e : row) {
                auto it = reduced.find(e.first);
                if (it == reduced.end())
                    continue;
                Rational f = e.second;
                for (const auto &t : it->second) {
                    auto jt = row.find(t.first);
                    if (jt == row.end()) {
                        row[t.first] = -f * t.second;
                    } else {
                        jt->second -= f * t.second;
                        if (jt->second.is_zero())
                            row.erase(jt);
                    }
                }
                again = true;
                break;
            }
        }
        if (row.empty())
            continue;
        int lead = row.begin()->first;
        Rational norm = row.begin()->second.inv();
        for (auto &t : row)
            t.second *= norm;
        // back-substitute into existing rows
        for (auto &pr : reduced) {
            auto jt = pr.second.find(lead);
            if (jt == pr.second.end())
                continue;
            Rational f = jt->second;
            for (const auto &t : row) {
                auto kt = pr.second.find(t.first);
                if (kt == pr.second.end()) {
                    pr.second[t.first] = -f * t.second;
                } else {
                    kt->second -= f * t.second;
                    if (kt->second.is_zero())
                        pr.second.erase(kt);
                }
            }
        }
        reduced[lead] = std::move(row);
    }

    piece.rank = (int)reduced.size();
    for (const auto &pr : reduced) {
        piece.pivots.push_back(pr.first);
        std::vector<std::pair<int, Rational>> rw;
        for (const auto &t : pr.second)
            if (t.first != pr.first)
                rw.push_back({t.first, -t.second});
        piece.rewrite[pr.first] = std::move(rw);
    }
    return piece;
}

const std::vector<RewriteTerm> &BasisTable::swap_rule(const Letter &x,
                                                      const Letter &y) const {
    auto it = rw2.find({x, y});
    if (it == rw2.end())
        throw std::logic_error("BasisTable: missing swap rule (window?)");
    return it->second;
}

BasisTable build_basis(const Truncation &tr, int lookup_m, int lookup_l) {
    if (!tr.valid())
        throw std::logic_error("build_basis: invalid truncation");
    if (lookup_l < 0)
        lookup_l = tr.L;
    BasisTable table;
    table.tr = tr;
    // two-letter pieces for every reachable grade
    for (int g = 2; g <= tr.L; ++g) {
        Piece piece = reduce_piece(tr, 2, g);
        // sorted words must never pivot; this is the h = 0 dimension claim
        for (int p : piece.pivots)
            if (word_canonical(piece.columns[p].first))
                throw std::runtime_error(
                    "build_basis: canonical column forced by relations");
        // extract swap rules from the h^0 pivot columns
        for (int p : piece.pivots) {
            const Column &col = piece.columns[p];
            if (col.second != 0 || col.first.size() != 2)
                continue;
            const Letter &x = col.first[0], &y = col.first[1];
            if (!(y < x))
                continue;
            std::vector<RewriteTerm> terms;
            for (const auto &t : piece.rewrite.at(p)) {
                const Column &c = piece.columns[t.first];
                terms.push_back({c.first, c.second, t.second});
            }
            table.rw2[{x, y}] = std::move(terms);
        }
        if (2 <= lookup_m && g <= lookup_l)
            table.pieces[{2, g}] = std::move(piece);
    }
    for (int m = 3; m <= std::min(lookup_m, tr.M); ++m)
        for (int g = m; g <= lookup_l; ++g)
            table.pieces[{m, g}] = reduce_piece(tr, m, g);
    return table;
}

// ---------------------------------------------------------------------------
// Normal form by leftmost adjacent-swap rewriting.

State normal_form(const Word &w, const HSeries &coeff, const BasisTable &table) {
    const Truncation &tr = table.tr;
    State out;
    if (coeff.is_zero())
        return out;
    if ((int)w.size() > tr.M || word_level(w) > tr.L) {
        out.overflow = true;
        return out;
    }
    // worklist of raw terms
    std::vector<std::pair<Word, HSeries>> work{{w, coeff}};
    while (!work.empty()) {
        auto [cur, c] = std::move(work.back());
        work.pop_back();
        if (c.is_zero())
            continue;
        size_t pos = 0;
        bool sorted = true;
        for (; pos + 1 < cur.size(); ++pos)
            if (cur[pos + 1] < cur[pos]) {
                sorted = false;
                break;
            }
        if (sorted) {
            out.add(cur, c);
            continue;
        }
        const auto &rule = table.swap_rule(cur[pos], cur[pos + 1]);
        int base_level = word_level(cur) - cur[pos].r - cur[pos + 1].r;
        for (const auto &t : rule) {
            HSeries nc = c.shift_h(t.k);
            if (nc.is_zero())
                continue;
            if (base_level + word_level(t.w) > tr.L) {
                out.overflow = true;
                continue;
            }
            Word nw;
            nw.reserve(cur.size());
            nw.insert(nw.end(), cur.begin(), cur.begin() + pos);
            nw.insert(nw.end(), t.w.begin(), t.w.end());
            nw.insert(nw.end(), cur.begin() + pos + 2, cur.end());
            work.push_back({std::move(nw), std::move(nc)});
        }
    }
    return out;
}

State normal_form_lookup(const Word &w, const HSeries &coeff,
                         const BasisTable &table, bool *covered) {
    const Truncation &tr = table.tr;
    State out;
    if (covered)
        *covered = true;
    int m = (int)w.size();
    for (int k = 0; k < tr.K; ++k) {
        if (coeff.coeff(k).is_zero())
            continue;
        int g = word_level(w) - k;
        auto it = table.pieces.find({m, g});
        if (it == table.pieces.end()) {
            if (covered)
                *covered = false;
            continue;
        }
        const Piece &piece = it->second;
        // locate the column
        int id = -1;
        for (size_t c = 0; c < piece.columns.size(); ++c)
            if (piece.columns[c].first == w && piece.columns[c].second == k) {
                id = (int)c;
                break;
            }
        if (id < 0) {
            out.overflow = true;
            continue;
        }
        auto rw = piece.rewrite.find(id);
        if (rw == piece.rewrite.end()) {
            out.add(w, HSeries(tr.K, coeff.coeff(k)).shift_h(k));
            continue;
        }
        for (const auto &t : rw->second) {
            const Column &col = piece.columns[t.first];
            out.add(col.first,
                    (HSeries(tr.K, coeff.coeff(k) * t.second)).shift_h(col.second));
        }
    }
    return out;
}

State letter_mul(const Letter &x, const State &s, const BasisTable &table) {
    State out;
    out.overflow = s.overflow;
    for (const auto &kv : s.terms) {
        Word w;
        w.reserve(kv.first.size() + 1);
        w.push_back(x);
        w.insert(w.end(), kv.first.begin(), kv.first.end());
        out += normal_form(w, kv.second, table);
    }
    return out;
}

State multiply(const State &a, const State &b, const BasisTable &table) {
    State out;
    out.overflow = a.overflow || b.overflow;
    for (const auto &ka : a.terms)
        for (const auto &kb : b.terms) {
            Word w = ka.first;
            w.insert(w.end(), kb.first.begin(), kb.first.end());
            out += normal_form(w, ka.second * kb.second, table);
        }
    return out;
}

} // namespace qve
