#include "rlsc/starting.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>
#include <utility>

namespace rlsc {

namespace {

using Grid = std::vector<int>;

Grid dihedral_grid(int n) {
    const int r = n / 2;
    Grid g(static_cast<std::size_t>(n) * n);
    auto at = [&](int i, int j) -> int& { return g[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const int v = ((j - i) % r + r) % r + 1;
            at(i, j) = v;
            at(i, j + r) = v + r;
        }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            at(i + r, j) = at(j, i + r);
            at(i + r, j + r) = at(j, i);
        }
    return g;
}

// Randomized MRV search for a transversal; returns column per row or empty.
// When `forced` is non-empty each attempt starts from one of those cells.
// avail[i] counts the columns still usable by row i and is kept incrementally.
// `budget` is shared across calls and decremented by the nodes spent.
std::vector<int> find_transversal(int n, const Grid& g, std::mt19937_64& rng, long node_limit, int attempts,
                                  const std::vector<Cell>& forced, long& budget) {
    std::vector<int> pos(static_cast<std::size_t>(n) * (n + 1));  // pos[i*(n+1)+s] = column of s in row i
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pos[static_cast<std::size_t>(i) * (n + 1) + g[static_cast<std::size_t>(i) * n + j]] = j;
    auto sym = [&](int i, int j) { return g[static_cast<std::size_t>(i) * n + j]; };

    for (int attempt = 0; attempt < attempts && budget > 0; ++attempt) {
        std::vector<int> col_of(n, -1), avail(n, n);
        std::vector<char> col_used(n, 0), sym_used(static_cast<std::size_t>(n) + 1, 0);
        long nodes = 0;

        // Marks column j and symbol s used, updating avail; returns false if some row dies.
        auto take = [&](int j, int s) {
            col_used[j] = 1;
            for (int i = 0; i < n; ++i)
                if (col_of[i] < 0 && !sym_used[sym(i, j)]) --avail[i];
            sym_used[s] = 1;
            for (int i = 0; i < n; ++i) {
                const int c = pos[static_cast<std::size_t>(i) * (n + 1) + s];
                if (col_of[i] < 0 && !col_used[c]) --avail[i];
            }
        };
        auto release = [&](int j, int s) {
            sym_used[s] = 0;
            for (int i = 0; i < n; ++i) {
                const int c = pos[static_cast<std::size_t>(i) * (n + 1) + s];
                if (col_of[i] < 0 && !col_used[c]) ++avail[i];
            }
            col_used[j] = 0;
            for (int i = 0; i < n; ++i)
                if (col_of[i] < 0 && !sym_used[sym(i, j)]) ++avail[i];
        };

        int depth0 = 0;
        if (!forced.empty()) {
            const Cell f = forced[attempt % forced.size()];
            col_of[f.row] = f.col;
            take(f.col, sym(f.row, f.col));
            depth0 = 1;
        }
        std::vector<int> cols;
        auto go = [&](auto&& self, int depth) -> bool {
            if (depth == n) return true;
            if (++nodes > node_limit) return false;
            int best = -1;
            for (int i = 0; i < n; ++i) {
                if (col_of[i] >= 0) continue;
                if (avail[i] == 0) return false;
                if (best < 0 || avail[i] < avail[best]) best = i;
            }
            std::vector<int> options;
            for (int j = 0; j < n; ++j)
                if (!col_used[j] && !sym_used[sym(best, j)]) options.push_back(j);
            std::shuffle(options.begin(), options.end(), rng);
            for (int j : options) {
                const int s = sym(best, j);
                col_of[best] = j;
                take(j, s);
                if (self(self, depth + 1)) return true;
                release(j, s);
                col_of[best] = -1;
                if (nodes > node_limit) return false;
            }
            return false;
        };
        const bool found = go(go, depth0);
        budget -= nodes;
        if (found) return col_of;
    }
    return {};
}

// Transversal of dihedral_grid(2r) for even r = 2k.
std::vector<int> dihedral_transversal(int m) {
    const int r = m / 2, k = r / 2;
    std::vector<int> col_of(m);
    for (int x = 0; x < r; ++x) {
        col_of[x] = x < k ? (2 * x) % r : (2 * x) % r + r;
        col_of[x + r] = x < k ? (2 * x + 1) % r + r : (2 * x + 1) % r;
    }
    return col_of;
}

long long mod_inverse(long long a, long long m) {
    long long t = 0, nt = 1, x = m, nx = ((a % m) + m) % m;
    while (nx != 0) {
        const long long q = x / nx;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(x, nx) = std::make_pair(nx, x - q * nx);
    }
    return x == 1 ? ((t % m) + m) % m : -1;
}

// For odd r not divisible by 3: transversal of dihedral_grid(2r) after swapping
// the intercalate on rows {0,r} and columns {0,r}. Row 0 takes the swapped
// cell, upper rows follow x -> 2x and lower rows x -> mu*x + 1 with
// mu = 2/3; the half is decided by the symbol value, alternating along the
// orbit of w -> w + kappa. Empty when r is divisible by 3.
std::vector<int> swapped_dihedral_transversal(int m) {
    const long long r = m / 2;
    if (r % 2 == 0 || r % 3 == 0) return {};
    const long long mu = 2 * mod_inverse(3, r) % r;
    const long long beta = ((1 - mu) % r + r) % r;
    const long long kappa = mod_inverse(2 * beta % r, r);
    std::vector<char> left(r, 0);
    for (long long t = 1; t < r; t += 2) left[t * kappa % r] = 1;
    std::vector<int> col_of(m);
    col_of[0] = 0;
    for (long long x = 1; x < r; ++x) col_of[x] = static_cast<int>(2 * x % r + (left[x] ? 0 : r));
    for (long long x = 0; x < r; ++x) {
        const long long w = ((beta * x - 1) % r + r) % r;
        col_of[x + r] = static_cast<int>((mu * x + 1) % r + (left[w] ? 0 : r));
    }
    return col_of;
}

bool is_transversal(int m, const Grid& g, const std::vector<int>& col_of) {
    std::vector<char> col(m, 0), sym(m + 1, 0);
    for (int i = 0; i < m; ++i) {
        const int j = col_of[i];
        const int s = g[static_cast<std::size_t>(i) * m + j];
        if (col[j] || sym[s]) return false;
        col[j] = sym[s] = 1;
    }
    return true;
}

void swap_on(int n, Grid& g, const Intercalate& C, std::set<Cell>& touched) {
    auto at = [&](int i, int j) -> int& { return g[static_cast<std::size_t>(i) * n + j]; };
    std::swap(at(C.r1, C.c1), at(C.r1, C.c2));
    std::swap(at(C.r2, C.c1), at(C.r2, C.c2));
    touched.insert({{C.r1, C.c1}, {C.r1, C.c2}, {C.r2, C.c1}, {C.r2, C.c2}});
}

int certified_minimum(int n, const std::vector<int>& census, const std::vector<Cell>& exceptional) {
    std::vector<char> ex(static_cast<std::size_t>(n) * n, 0);
    for (auto [r, c] : exceptional) ex[static_cast<std::size_t>(r) * n + c] = 1;
    int best = n;
    for (std::size_t i = 0; i < census.size(); ++i)
        if (!ex[i]) best = std::min(best, census[i]);
    return best;
}

}  // namespace

StartingSquare build_even(int n) {
    if (n < 2 || n % 2 != 0) throw OddOrder("build_even needs an even order >= 2");
    StartingSquare out{LatinSquare(n, dihedral_grid(n)), {}, n / 2, n / 2};
    return out;
}

StartingSquare build_odd(int n) {
    if (n % 2 == 0) throw EvenOrder("build_odd needs an odd order");
    if (n < 3) throw InvalidInput("build_odd needs n >= 3");
    if (n == 3) {
        // Budget 3n+7 exceeds the cell count, so the cyclic square qualifies.
        Grid g(9);
        std::vector<Cell> all;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                g[i * 3 + j] = (i + j) % 3 + 1;
                all.push_back({i, j});
            }
        return {LatinSquare(3, std::move(g)), all, 1, 1};
    }

    const int m = n - 1;
    const Grid base = dihedral_grid(m);
    std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned>(n));
    const int target = n / 2 - kOddCensusDeficit;

    // Preliminary swaps. An explicit transversal exists when r is even (no
    // swap) or when r is odd and not divisible by 3 (corner swap). Otherwise
    // candidate plans of one or two intercalates seed a bounded search.
    std::vector<std::vector<Intercalate>> swap_plans;
    const int r = m / 2;
    const Intercalate corner{0, r, 0, r};
    const bool explicit_plan = r % 2 == 0 || r % 3 != 0;
    if (r % 2 == 0)
        swap_plans.push_back({});
    else
        swap_plans.push_back({corner});
    if (!explicit_plan) {
        const LatinSquare B(m, base);
        std::vector<Intercalate> all;
        if (m <= 12) {
            // Small bases: consider every intercalate, not only strong ones.
            for (int r1 = 0; r1 < m; ++r1)
                for (int r2 = r1 + 1; r2 < m; ++r2)
                    for (int c1 = 0; c1 < m; ++c1)
                        for (int c2 = c1 + 1; c2 < m; ++c2)
                            if (is_intercalate(B, {r1, r2, c1, c2})) all.push_back({r1, r2, c1, c2});
        } else {
            // Sample strong intercalates; enumerating them all is cubic in memory.
            std::uniform_int_distribution<int> pick(0, m - 1);
            std::set<Intercalate> seen;
            for (int guard = 0; all.size() < 96 && guard < 200000; ++guard) {
                const int r1 = pick(rng), r2 = pick(rng), c1 = pick(rng);
                if (r1 == r2) continue;
                const int s = B.at(r1, c1), t = B.at(r2, c1);
                if (!is_strong_pair(m, s, t)) continue;
                int c2 = 0;
                while (B.at(r1, c2) != t) ++c2;
                if (B.at(r2, c2) != s) continue;
                const Intercalate C{std::min(r1, r2), std::max(r1, r2), std::min(c1, c2), std::max(c1, c2)};
                if (seen.insert(C).second) all.push_back(C);
            }
        }
        const std::size_t step1 = std::max<std::size_t>(1, all.size() / 64);
        for (std::size_t i = 0; i < all.size() && swap_plans.size() < 64; i += step1) swap_plans.push_back({all[i]});
        const std::size_t step2 = m <= 12 ? 1 : std::max<std::size_t>(1, all.size() / 32);
        for (std::size_t i = 0; i + 1 < all.size(); i += step2) {
            const auto& a = all[i];
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                const auto& b = all[j];
                if (a.r1 != b.r1 && a.r1 != b.r2 && a.r2 != b.r1 && a.r2 != b.r2 && a.c1 != b.c1 && a.c1 != b.c2 &&
                    a.c2 != b.c1 && a.c2 != b.c2) {
                    swap_plans.push_back({a, b});
                    if (m > 12) break;
                }
            }
        }
    }

    // Small bases may need longer swap walks before a transversal appears.
    if (!explicit_plan && m <= 12) {
        for (int walk = 0; walk < 2000; ++walk) {
            LatinSquare W(m, base);
            std::vector<Intercalate> plan;
            for (int step = 0; step < 3; ++step) {
                std::vector<Intercalate> here;
                for (int r1 = 0; r1 < m; ++r1)
                    for (int r2 = r1 + 1; r2 < m; ++r2)
                        for (int c1 = 0; c1 < m; ++c1)
                            for (int c2 = c1 + 1; c2 < m; ++c2)
                                if (is_intercalate(W, {r1, r2, c1, c2})) here.push_back({r1, r2, c1, c2});
                const auto C = here[std::uniform_int_distribution<std::size_t>(0, here.size() - 1)(rng)];
                W = swap_intercalate(W, C);
                plan.push_back(C);
            }
            swap_plans.push_back(plan);
        }
    }

    // Searches are only needed when r is odd and divisible by 3; cap their
    // total work so failure is reported in seconds.
    long search_budget = std::max(2000000L, 4000000000L / m);
    for (const auto& plan : swap_plans) {
        if (search_budget <= 0) break;
        for (int tries = 0; tries < 4 && search_budget > 0; ++tries) {
            Grid g = base;
            std::set<Cell> touched;
            for (const auto& C : plan) swap_on(m, g, C, touched);
            const std::vector<Cell> forced(touched.begin(), touched.end());
            std::vector<int> sigma;
            if (plan.empty())
                sigma = dihedral_transversal(m);
            else if (plan.size() == 1 && plan[0] == corner && tries == 0)
                sigma = swapped_dihedral_transversal(m);
            if (sigma.empty() || !is_transversal(m, g, sigma)) sigma = find_transversal(m, g, rng, 200L * m, 4, forced, search_budget);
            if (sigma.empty()) break;

            Grid out(static_cast<std::size_t>(n) * n);
            auto at = [&](int i, int j) -> int& { return out[static_cast<std::size_t>(i) * n + j]; };
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) at(i, j) = g[static_cast<std::size_t>(i) * m + j];
            std::set<Cell> exceptional;
            for (int i = 0; i < m; ++i) {
                const int j = sigma[i];
                const int s = at(i, j);
                at(i, m) = s;
                at(m, j) = s;
                at(i, j) = n;
                exceptional.insert({i, j});
            }
            at(m, m) = n;
            for (int i = 0; i < n; ++i) {
                exceptional.insert({i, m});
                exceptional.insert({m, i});
            }
            LatinSquare L(n, std::move(out));
            const auto census = strong_intercalate_census(L);
            // Swapped cells are exceptional while the budget allows, weakest first.
            std::vector<Cell> extra;
            for (const auto& cell : touched)
                if (!exceptional.count(cell)) extra.push_back(cell);
            std::stable_sort(extra.begin(), extra.end(), [&](const Cell& a, const Cell& b) {
                return census[static_cast<std::size_t>(a.row) * n + a.col] <
                       census[static_cast<std::size_t>(b.row) * n + b.col];
            });
            for (const auto& cell : extra) {
                if (static_cast<long long>(exceptional.size()) >= 3LL * n + 7) break;
                exceptional.insert(cell);
            }
            std::vector<Cell> ex(exceptional.begin(), exceptional.end());
            const int certified = certified_minimum(n, census, ex);
            if (certified >= target) return {std::move(L), std::move(ex), n / 2, certified};
        }
    }
    throw ConstructionFailed("no prolongation met the census certificate");
}

StartingSquare build_starting_square(int n) { return n % 2 == 0 ? build_even(n) : build_odd(n); }

std::vector<int> strong_intercalate_census(const LatinSquare& L) {
    const int n = L.order();
    std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
    std::vector<int> row_of(static_cast<std::size_t>(n) * (n + 1));  // row_of[c*(n+1)+s]
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) row_of[static_cast<std::size_t>(c) * (n + 1) + L.at(r, c)] = r;
    for (int r = 0; r < n; ++r)
        for (int a = 0; a < n; ++a) {
            const int s = L.at(r, a);
            for (int b = a + 1; b < n; ++b) {
                const int t = L.at(r, b);
                if (!is_strong_pair(n, s, t)) continue;
                const int r2 = row_of[static_cast<std::size_t>(a) * (n + 1) + t];
                if (r2 <= r || L.at(r2, b) != s) continue;
                ++count[static_cast<std::size_t>(r) * n + a];
                ++count[static_cast<std::size_t>(r) * n + b];
                ++count[static_cast<std::size_t>(r2) * n + a];
                ++count[static_cast<std::size_t>(r2) * n + b];
            }
        }
    return count;
}

std::vector<Intercalate> strong_intercalates(const LatinSquare& L) {
    const int n = L.order();
    std::vector<Intercalate> out;
    std::vector<int> row_of(static_cast<std::size_t>(n) * (n + 1));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) row_of[static_cast<std::size_t>(c) * (n + 1) + L.at(r, c)] = r;
    for (int r = 0; r < n; ++r)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                const int s = L.at(r, a), t = L.at(r, b);
                if (!is_strong_pair(n, s, t)) continue;
                const int r2 = row_of[static_cast<std::size_t>(a) * (n + 1) + t];
                if (r2 > r && L.at(r2, b) == s) out.push_back({r, r2, a, b});
            }
    return out;
}

}  // namespace rlsc
