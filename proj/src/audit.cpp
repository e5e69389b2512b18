// Exact bad-index audit.
//
// The future of a history prefix only depends on its momentum graph: alive
// particles are vertices typed tagged/input/created, each live momentum is an
// edge between the two slots carrying it (typed input/fresh), and the last
// creation pair is marked for the (1,-1) exclusion. Annihilation b -> a moves
// b's edges onto a and cancels the edges joining a and b. varpi is a function
// of the graph, so histories can be counted per isomorphism class.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <unordered_map>

#include "kinlab/combinatorics.hpp"

namespace kinlab::comb {

namespace {

constexpr int kMaxV = 8;

struct Graph {
    int nv = 0;
    std::array<std::uint8_t, kMaxV> type{};  // 0 tagged, 1 input, 2 created
    std::array<std::array<std::array<std::uint8_t, kMaxV>, kMaxV>, 2> cnt{};  // [edge type][u][v], symmetric
    int ma = -1, mb = -1;

    bool good() const {
        for (int v = 1; v < nv; ++v) {
            if (type[v] == 2) return true;
            if (type[v] == 1)
                for (int u = 0; u < nv; ++u)
                    if (cnt[1][v][u]) return true;
        }
        return false;
    }

    std::string key(const std::array<int, kMaxV>& perm) const {
        // perm maps new position -> old vertex
        std::string k;
        k.push_back(static_cast<char>(nv));
        std::array<int, kMaxV> inv{};
        for (int p = 0; p < nv; ++p) inv[perm[p]] = p;
        for (int p = 0; p < nv; ++p) k.push_back(static_cast<char>(type[perm[p]]));
        k.push_back(static_cast<char>(ma < 0 ? 127 : inv[ma]));
        k.push_back(static_cast<char>(mb < 0 ? 127 : inv[mb]));
        for (int t = 0; t < 2; ++t)
            for (int p = 0; p < nv; ++p)
                for (int q = p + 1; q < nv; ++q) k.push_back(static_cast<char>(cnt[t][perm[p]][perm[q]]));
        return k;
    }

    std::string canonical() const {
        std::array<int, kMaxV> perm{};
        std::iota(perm.begin(), perm.begin() + nv, 0);
        std::string best = key(perm);
        while (std::next_permutation(perm.begin() + 1, perm.begin() + nv)) {
            bool typed_ok = true;  // only permute within a vertex type
            for (int p = 1; p < nv; ++p)
                if (type[perm[p]] != type[p]) typed_ok = false;
            if (!typed_ok) continue;
            auto k = key(perm);
            if (k < best) best = std::move(k);
        }
        return best;
    }

    void remove_vertex(int b) {
        for (int t = 0; t < 2; ++t) {
            for (int u = b; u + 1 < nv; ++u) cnt[t][u] = cnt[t][u + 1];
            for (int u = 0; u + 1 < nv; ++u)
                for (int v = b; v + 1 < nv; ++v) cnt[t][u][v] = cnt[t][u][v + 1];
            for (int u = 0; u < kMaxV; ++u) cnt[t][u][nv - 1] = cnt[t][nv - 1][u] = 0;
        }
        for (int u = b; u + 1 < nv; ++u) type[u] = type[u + 1];
        type[nv - 1] = 0;
        --nv;
    }
};

struct Transition {
    int next;
    std::uint64_t mult;
};

class StateTable {
public:
    explicit StateTable(std::uint64_t cap) : cap_(cap) {}

    int intern(const Graph& g) {
        auto k = g.canonical();
        auto it = ids_.find(k);
        if (it != ids_.end()) return it->second;
        if (states_.size() >= cap_) throw ResourceLimit("bad_index_audit: state cap exceeded");
        int id = static_cast<int>(states_.size());
        ids_.emplace(std::move(k), id);
        states_.push_back(g);
        good_.push_back(g.good());
        return id;
    }

    bool good(int id) const { return good_[id]; }

    const std::vector<Transition>& transitions(int id, int sign) {
        auto key = std::make_pair(id, sign);
        auto it = trans_.find(key);
        if (it != trans_.end()) return it->second;
        std::map<int, std::uint64_t> acc;
        Graph g = states_[id];
        if (sign == 1) {
            if (g.nv >= kMaxV) throw ResourceLimit("bad_index_audit: too many alive particles");
            for (int a = 0; a < g.nv; ++a) {
                Graph h = g;
                int b = h.nv++;
                h.type[b] = 2;
                h.cnt[1][a][b] = h.cnt[1][b][a] = 1;
                h.ma = a;
                h.mb = b;
                acc[intern(h)] += 1;
            }
        } else {
            for (int a = 0; a < g.nv; ++a)
                for (int b = 1; b < g.nv; ++b) {
                    if (a == b || (a == g.ma && b == g.mb)) continue;
                    Graph h = g;
                    h.ma = h.mb = -1;
                    for (int t = 0; t < 2; ++t) {
                        h.cnt[t][a][b] = h.cnt[t][b][a] = 0;
                        for (int x = 0; x < h.nv; ++x) {
                            if (x == a || x == b) continue;
                            h.cnt[t][a][x] = h.cnt[t][x][a] = static_cast<std::uint8_t>(h.cnt[t][a][x] + h.cnt[t][b][x]);
                            h.cnt[t][b][x] = h.cnt[t][x][b] = 0;
                        }
                    }
                    h.remove_vertex(b);
                    acc[intern(h)] += 1;
                }
        }
        std::vector<Transition> v;
        for (auto& [n, c] : acc) v.push_back({n, c});
        return trans_.emplace(key, std::move(v)).first->second;
    }

    int initial(int m) {
        Graph g;
        g.nv = m + 1;
        for (int j = 1; j <= m; ++j) {
            g.type[j] = 1;
            g.cnt[0][0][j] = g.cnt[0][j][0] = 1;
        }
        return intern(g);
    }

private:
    std::uint64_t cap_;
    std::unordered_map<std::string, int> ids_;
    std::vector<Graph> states_;
    std::vector<bool> good_;
    std::map<std::pair<int, int>, std::vector<Transition>> trans_;
};

// Interior positions (1-based, alpha <= i < beta) of every tent.
std::vector<char> tent_interior(const Signs& s, bool& has) {
    std::vector<char> in(s.size() + 1, 0);
    has = true;
    try {
        for (const auto& t : tent_decomposition(s).tents)
            for (int i = t.alpha; i < t.beta; ++i) in[i] = 1;
    } catch (const std::invalid_argument&) {
        has = false;
    }
    return in;
}

std::vector<Abstract> audited_abstracts(int m0, int n_max) {
    std::vector<Abstract> out;
    for (int m = 0; m <= m0; ++m)
        for (auto& a : enumerate_abstracts(m, m0, n_max))
            if (a.signs.front() == 1) out.push_back(a);
    return out;
}

void tally(AuditReport& rep, const AuditRecord& r) {
    rep.records.push_back(r);
    rep.total_histories += r.histories;
    rep.bound_violations += r.bound_violations;
    rep.tent_violations += r.tent_violations;
}

}  // namespace

AuditReport bad_index_audit(int m0, int n_max, std::uint64_t state_cap) {
    AuditReport rep;
    rep.m0 = m0;
    rep.n_max = n_max;
    StateTable table(state_cap);
    for (const auto& a : audited_abstracts(m0, n_max)) {
        const int n = a.length();
        AuditRecord r;
        r.signs = a.signs;
        r.degree = a.degree;
        auto interior = tent_interior(a.signs, r.has_tents);
        // (state, bad count, tent violation) -> number of history prefixes
        std::map<std::tuple<int, int, int>, std::uint64_t> cur, next;
        cur[{table.initial(a.degree), 0, 0}] = 1;
        for (int i = 1; i <= n; ++i) {
            next.clear();
            for (const auto& [k, c] : cur) {
                auto [sid, bad, viol] = k;
                for (const auto& t : table.transitions(sid, a.signs[i - 1])) {
                    int b2 = bad, v2 = viol;
                    if (i < n && !table.good(t.next)) {
                        ++b2;
                        if (interior[i]) v2 = 1;
                    }
                    next[{t.next, b2, v2}] += c * t.mult;
                }
            }
            std::swap(cur, next);
        }
        for (const auto& [k, c] : cur) {
            auto [sid, bad, viol] = k;
            r.histories += c;
            r.max_bad = std::max(r.max_bad, bad);
            if (4 * bad > n + 3 * a.degree) r.bound_violations += c;
            if (viol) r.tent_violations += c;
        }
        tally(rep, r);
    }
    return rep;
}

AuditReport bad_index_audit_enumerate(int m0, int n_max, std::uint64_t history_cap) {
    AuditReport rep;
    rep.m0 = m0;
    rep.n_max = n_max;
    std::uint64_t seen = 0;
    for (const auto& a : audited_abstracts(m0, n_max)) {
        const int n = a.length();
        AuditRecord r;
        r.signs = a.signs;
        r.degree = a.degree;
        auto interior = tent_interior(a.signs, r.has_tents);
        for_each_history(a, [&](const History& h) {
            if (++seen > history_cap) throw ResourceLimit("bad_index_audit_enumerate: history cap exceeded");
            auto w = varpi_sequence(h);
            int bad = 0;
            bool viol = false;
            for (int i = 1; i < n; ++i)
                if (!w[i - 1]) {
                    ++bad;
                    if (interior[i]) viol = true;
                }
            ++r.histories;
            r.max_bad = std::max(r.max_bad, bad);
            if (4 * bad > n + 3 * a.degree) ++r.bound_violations;
            if (viol) ++r.tent_violations;
        });
        tally(rep, r);
    }
    return rep;
}

}  // namespace kinlab::comb
