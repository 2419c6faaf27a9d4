#include "qve/fockrep.hpp"

#include <functional>

namespace qve {

std::vector<FockMonomial> fock_spanning_set(const Truncation &tr, int dmax,
                                            int lmax) {
    std::vector<FockMonomial> out;
    // x/y occupation patterns
    std::vector<std::vector<int>> occs;
    std::vector<int> cur(tr.N, 0);
    int cap = tr.sign < 0 ? 1 : dmax;
    std::function<void(int, int)> rec = [&](int pos, int total) {
        if (pos == tr.N) {
            occs.push_back(cur);
            return;
        }
        for (int e = 0; e <= cap && total + e <= dmax; ++e) {
            cur[pos] = e;
            rec(pos + 1, total + e);
        }
        cur[pos] = 0;
    };
    rec(0, 0);
    // t-monomials of total level <= lmax (weights r per t_r)
    std::vector<std::map<int, int>> tms;
    std::map<int, int> tcur;
    std::function<void(int, int)> trec = [&](int r, int level) {
        if (r > tr.L) {
            tms.push_back(tcur);
            return;
        }
        for (int e = 0; level + e * r <= lmax; ++e) {
            if (e)
                tcur[r] = e;
            trec(r + 1, level + e * r);
            tcur.erase(r);
        }
    };
    trec(1, 0);
    for (const auto &xo : occs)
        for (const auto &yo : occs)
            for (const auto &tm : tms) {
                FockMonomial m;
                m.x = xo;
                m.y = yo;
                m.t = tm;
                out.push_back(m);
            }
    return out;
}

FockReport check_rtt_on_fock(const Truncation &tr, int level_max, int dmax,
                             int tshift) {
    FockReport rep;
    auto span = fock_spanning_set(tr, dmax, level_max);
    for (int g = 2 - (tr.K - 1); g <= level_max; ++g) {
        auto rows = generate_relations(tr, 2, g);
        for (const auto &row : rows) {
            // skip rows touching levels above the requested bound
            bool inside = true;
            for (const auto &t : row)
                if (word_level(t.first.first) > level_max)
                    inside = false;
            if (!inside)
                continue;
            for (const auto &m : span) {
                FockElement acc;
                FockElement base;
                base.add(m, HSeries(tr.K, Rational(1)));
                for (const auto &t : row) {
                    FockElement img = base;
                    const Word &w = t.first.first;
                    for (auto it = w.rbegin(); it != w.rend(); ++it)
                        img = fock_act(tr, *it, img, tshift);
                    HSeries c = HSeries(tr.K, t.second).shift_h(t.first.second);
                    for (const auto &kv : img.terms)
                        acc.add(kv.first, kv.second * c);
                }
                ++rep.checked;
                if (!acc.is_zero()) {
                    rep.pass = false;
                    rep.witness = "relation in piece g=" + std::to_string(g) +
                                  " does not annihilate a monomial";
                    return rep;
                }
            }
        }
    }
    return rep;
}

} // namespace qve
