#include "kinlab/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kinlab::comb {

bool SignsLess::operator()(const Signs& a, const Signs& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

int degree_of(const Signs& s) { return -std::accumulate(s.begin(), s.end(), 0); }

std::string to_string(const Signs& s) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

bool validate_abstract(const Signs& signs, int m, int m0) {
    if (signs.empty() || m < 0 || m > m0) return false;
    int level = m;
    for (std::size_t j = 0; j < signs.size(); ++j) {
        if (signs[j] != 1 && signs[j] != -1) return false;
        level += signs[j];
        if (j + 1 < signs.size() && (level <= 0 || level > m0)) return false;
    }
    return level == 0;
}

namespace {

void extend(Signs& cur, int level, int m, int m0, int max_len, std::vector<Abstract>& out) {
    // Children in lexicographic order: -1 before +1.
    for (int s : {-1, 1}) {
        int next = level + s;
        if (next < 0 || next > m0) continue;
        cur.push_back(s);
        if (next == 0)
            out.push_back({cur, m, m0});
        else if (static_cast<int>(cur.size()) < max_len)
            extend(cur, next, m, m0, max_len, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Abstract> enumerate_abstracts(int m, int m0, int max_len) {
    std::vector<Abstract> out;
    if (m < 0 || m > m0 || max_len <= 0) return out;
    Signs cur;
    extend(cur, m, m, m0, max_len, out);
    std::sort(out.begin(), out.end(),
              [](const Abstract& a, const Abstract& b) { return SignsLess{}(a.signs, b.signs); });
    return out;
}

AbstractSet admissible_closure_of(const AbstractSet& seed, int m0) {
    AbstractSet out;
    std::vector<Signs> work(seed.begin(), seed.end());
    while (!work.empty()) {
        Signs s = std::move(work.back());
        work.pop_back();
        int m = degree_of(s);
        if (!validate_abstract(s, m, m0) || !out.insert(s).second) continue;
        if (s.size() > 1) work.emplace_back(s.begin() + 1, s.end());
        Signs pre{-1};
        pre.insert(pre.end(), s.begin(), s.end());
        if (validate_abstract(pre, m + 1, m0)) work.push_back(std::move(pre));
    }
    return out;
}

AbstractSet admissible_closure(int m0, int K) {
    AbstractSet seed;
    for (int m = 0; m <= m0; ++m)
        for (auto& a : enumerate_abstracts(m, m0, K)) seed.insert(a.signs);
    return admissible_closure_of(seed, m0);
}

bool is_admissible(const AbstractSet& omega, int m0) {
    for (const auto& s : omega) {
        int m = degree_of(s);
        if (!validate_abstract(s, m, m0)) return false;
        if (s.size() > 1 && !omega.count(Signs(s.begin() + 1, s.end()))) return false;
        Signs pre{-1};
        pre.insert(pre.end(), s.begin(), s.end());
        if (validate_abstract(pre, m + 1, m0) && !omega.count(pre)) return false;
    }
    return true;
}

AbstractSet boundary(const AbstractSet& omega, int m0) {
    if (!is_admissible(omega, m0)) throw std::invalid_argument("boundary: set is not admissible");
    AbstractSet out;
    for (const auto& s : omega) {
        int m = degree_of(s) - 1;
        if (m < 0 || m >= m0) continue;
        Signs t{1};
        t.insert(t.end(), s.begin(), s.end());
        if (!omega.count(t)) out.insert(t);
    }
    return out;
}

namespace {

struct HistoryWalker {
    const Abstract& abs;
    std::vector<Collision> cols;
    std::vector<std::vector<int>> alive;
    int max_seen = 0;
    const std::function<void(const History&)>* visit = nullptr;
    History scratch;
    std::uint64_t count = 0;

    explicit HistoryWalker(const Abstract& a) : abs(a) {
        std::vector<int> w0(a.degree + 1);
        std::iota(w0.begin(), w0.end(), 0);
        alive.push_back(w0);
        max_seen = a.degree;
    }

    void run(std::size_t i) {
        if (i == abs.signs.size()) {
            ++count;
            if (visit) {
                scratch.abstract = abs;
                scratch.collisions = cols;
                scratch.alive = alive;
                (*visit)(scratch);
            }
            return;
        }
        const auto w = alive.back();
        int s = abs.signs[i];
        if (s == 1) {
            int b = max_seen + 1;
            for (int a : w) {
                auto next = w;
                next.push_back(b);
                int saved = max_seen;
                max_seen = b;
                push(i, {1, a, b}, std::move(next));
                max_seen = saved;
            }
        } else {
            for (int a : w)
                for (int b : w) {
                    if (b == a || b == 0) continue;
                    if (i > 0 && abs.signs[i - 1] == 1 && cols.back().a == a && cols.back().b == b) continue;
                    std::vector<int> next;
                    for (int x : w)
                        if (x != b) next.push_back(x);
                    push(i, {-1, a, b}, std::move(next));
                }
        }
    }

    void push(std::size_t i, Collision c, std::vector<int> next) {
        cols.push_back(c);
        alive.push_back(std::move(next));
        run(i + 1);
        alive.pop_back();
        cols.pop_back();
    }
};

}  // namespace

std::vector<History> enumerate_histories(const Abstract& a) {
    std::vector<History> out;
    if (!validate_abstract(a.signs, a.degree, a.m0)) return out;
    for_each_history(a, [&](const History& h) { out.push_back(h); });
    return out;
}

void for_each_history(const Abstract& a, const std::function<void(const History&)>& visit) {
    if (!validate_abstract(a.signs, a.degree, a.m0)) return;
    HistoryWalker w(a);
    w.visit = &visit;
    w.run(0);
}

std::uint64_t count_histories(const Abstract& a) {
    if (!validate_abstract(a.signs, a.degree, a.m0)) return 0;
    HistoryWalker w(a);
    w.run(0);
    return w.count;
}

History sample_history(const Abstract& a, std::mt19937_64& rng, int max_attempts) {
    if (!validate_abstract(a.signs, a.degree, a.m0))
        throw std::invalid_argument("sample_history: invalid abstract " + to_string(a.signs));
    History h;
    h.abstract = a;
    std::vector<Collision> options;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        h.collisions.clear();
        h.alive.assign(1, {});
        for (int j = 0; j <= a.degree; ++j) h.alive[0].push_back(j);
        int max_seen = a.degree;
        bool dead = false;
        for (std::size_t i = 0; i < a.signs.size() && !dead; ++i) {
            const auto& w = h.alive.back();
            options.clear();
            if (a.signs[i] == 1) {
                for (int x : w) options.push_back({1, x, max_seen + 1});
            } else {
                for (int x : w)
                    for (int y : w) {
                        if (y == x || y == 0) continue;
                        if (i > 0 && a.signs[i - 1] == 1 && h.collisions.back().a == x && h.collisions.back().b == y)
                            continue;
                        options.push_back({-1, x, y});
                    }
            }
            if (options.empty()) {
                dead = true;
                break;
            }
            const Collision c = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
            std::vector<int> next;
            if (c.s == 1) {
                next = w;
                next.push_back(c.b);
                max_seen = c.b;
            } else {
                for (int x : w)
                    if (x != c.b) next.push_back(x);
            }
            h.collisions.push_back(c);
            h.alive.push_back(std::move(next));
        }
        if (!dead) return h;
    }
    throw std::invalid_argument("sample_history: no history of " + to_string(a.signs) + " found in " +
                                std::to_string(max_attempts) + " attempts");
}

bool validate_history(const History& h) {
    const auto& a = h.abstract;
    if (!validate_abstract(a.signs, a.degree, a.m0)) return false;
    std::size_t n = a.signs.size();
    if (h.collisions.size() != n || h.alive.size() != n + 1) return false;
    std::vector<int> w(a.degree + 1);
    std::iota(w.begin(), w.end(), 0);
    if (h.alive[0] != w) return false;
    int max_seen = a.degree;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = h.collisions[i];
        if (c.s != a.signs[i] || c.a == c.b || c.b == 0) return false;
        if (!std::binary_search(w.begin(), w.end(), c.a)) return false;
        if (c.s == 1) {
            if (c.b != max_seen + 1) return false;
            max_seen = c.b;
            w.push_back(c.b);
        } else {
            if (!std::binary_search(w.begin(), w.end(), c.b)) return false;
            w.erase(std::find(w.begin(), w.end(), c.b));
        }
        if (i + 1 < n && c.s == 1 && a.signs[i + 1] == -1 && h.collisions[i + 1].a == c.a &&
            h.collisions[i + 1].b == c.b)
            return false;
        if (h.alive[i + 1] != w) return false;
        if (static_cast<int>(w.size()) != static_cast<int>(h.alive[i].size()) + c.s) return false;
    }
    return true;
}

WaveVectorTable wave_vector_table(const History& h) {
    const auto& a = h.abstract;
    int n = a.length();
    int m = a.degree;
    WaveVectorTable t;
    t.n = n;
    t.S = (n + m) / 2;
    t.slots = t.S + 1;
    t.c.assign(static_cast<std::size_t>(n + 1) * t.slots * t.S, 0);
    for (int j = 1; j <= m; ++j) {
        t.at(0, 0, j - 1) = -1;
        t.at(0, j, j - 1) = 1;
    }
    int fresh = m;
    for (int i = 1; i <= n; ++i) {
        const auto& c = h.collisions[i - 1];
        for (int j = 0; j < t.slots; ++j)
            for (int l = 0; l < t.S; ++l) t.at(i, j, l) = t.at(i - 1, j, l);
        if (c.s == 1) {
            int l = fresh++;
            t.at(i, c.a, l) -= 1;
            t.at(i, c.b, l) = 1;
        } else {
            for (int l = 0; l < t.S; ++l) {
                t.at(i, c.a, l) = static_cast<std::int8_t>(t.at(i - 1, c.a, l) + t.at(i - 1, c.b, l));
                t.at(i, c.b, l) = 0;
            }
        }
    }
    return t;
}

bool WaveVectorTable::momentum_conserved() const {
    for (int i = 0; i <= n; ++i)
        for (int l = 0; l < S; ++l) {
            int sum = 0;
            for (int j = 0; j < slots; ++j) sum += at(i, j, l);
            if (sum != 0) return false;
        }
    return true;
}

bool WaveVectorTable::column_property() const {
    for (int i = 0; i <= n; ++i)
        for (int l = 0; l < S; ++l) {
            int nz = 0, sum = 0;
            for (int j = 0; j < slots; ++j) {
                int v = at(i, j, l);
                if (v < -1 || v > 1) return false;
                if (v) ++nz, sum += v;
            }
            if (nz != 0 && !(nz == 2 && sum == 0)) return false;
        }
    return true;
}

std::vector<int> varpi_sequence(const History& h, const WaveVectorTable& q) {
    int n = h.abstract.length();
    int m = h.abstract.degree;
    std::vector<int> out;
    for (int i = 1; i < n; ++i) {
        int good = 0;
        for (int j : h.alive[i])
            if (j > m) good = 1;
        for (int j = 1; j <= m && !good; ++j)
            for (int l = m; l < q.S && !good; ++l)
                if (q.at(i, j, l) != 0) good = 1;
        out.push_back(good);
    }
    return out;
}

std::vector<int> varpi_sequence(const History& h) { return varpi_sequence(h, wave_vector_table(h)); }

namespace {

// Tent starting at 0-based position p; returns 0-based end or -1.
int tent_end(const Signs& s, int p, int& type) {
    int n = static_cast<int>(s.size());
    if (p + 1 >= n || s[p] != 1) return -1;
    if (s[p + 1] == 1) {
        int lvl = 0;
        for (int j = p; j < n; ++j) {
            lvl += s[j];
            if (lvl == 0) {
                type = 0;
                return j;
            }
        }
        return -1;
    }
    if (p + 2 >= n) return -1;
    if (s[p + 2] == -1) {
        type = 1;
        return p + 2;
    }
    return tent_end(s, p + 2, type);
}

}  // namespace

TentDecomposition tent_decomposition(const Signs& s) {
    TentDecomposition d;
    int n = static_cast<int>(s.size());
    int p = 0;
    while (p < n) {
        if (s[p] == -1) {
            d.down_steps.push_back(p + 1);
            ++p;
            continue;
        }
        int type = 0;
        int e = tent_end(s, p, type);
        if (e < 0) throw std::invalid_argument("tent_decomposition: no decomposition for " + to_string(s));
        d.tents.push_back({p + 1, e + 1, type});
        p = e + 1;
    }
    return d;
}

std::vector<RemainderEntry> remainder_catalog(const AbstractSet& omega, int m0) {
    std::vector<RemainderEntry> out;
    if (omega.empty()) return out;
    if (!is_admissible(omega, m0)) throw std::invalid_argument("remainder_catalog: set is not admissible");
    for (const auto& s : omega) {
        if (degree_of(s) != 1 || s.size() < 3) continue;
        int n = static_cast<int>(s.size());
        out.push_back({0, s, "omega1-tail", n, n + 1, n - 1, count_histories({s, 1, m0})});
    }
    if (m0 >= 2) out.push_back({0, {}, "renormalization", 0, 4, 0, 2});
    for (const auto& s : boundary(omega, m0)) {
        int m = degree_of(s);
        if (m < 1 || m >= m0) continue;
        int n = static_cast<int>(s.size());
        out.push_back({m, s, "boundary", n, n, n - 2, count_histories({s, m, m0})});
    }
    return out;
}

}  // namespace kinlab::comb
