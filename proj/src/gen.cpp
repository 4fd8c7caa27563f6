#include "rlsc/gen.hpp"

#include <algorithm>
#include <numeric>

namespace rlsc {

PartialLatinSquare random_pls(const RandomPlsModel& model, std::mt19937_64& rng) {
    const int n = model.n;
    if (n < 1) throw InvalidInput("n must be positive");
    if (!(model.p >= 0.0 && model.p <= 1.0)) throw InvalidInput("p must lie in [0,1]");
    std::bernoulli_distribution fill(model.p);
    std::uniform_int_distribution<int> sym(1, n);
    std::vector<int> g(static_cast<std::size_t>(n) * n, 0);
    for (auto& v : g)
        if (fill(rng)) v = sym(rng);
    auto at = [&](int r, int c) -> int& { return g[static_cast<std::size_t>(r) * n + c]; };
    std::vector<char> seen(n + 1);
    for (int r = 0; r < n; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = n - 1; c >= 0; --c) {
            int& v = at(r, c);
            if (v == 0) continue;
            if (seen[v]) v = 0;
            else seen[v] = 1;
        }
    }
    for (int c = 0; c < n; ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int r = n - 1; r >= 0; --r) {
            int& v = at(r, c);
            if (v == 0) continue;
            if (seen[v]) v = 0;
            else seen[v] = 1;
        }
    }
    PartialLatinSquare P(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) P.set(r, c, at(r, c));
    return P;
}

AvoidanceArray random_array(const RandomArrayModel& model, std::mt19937_64& rng,
                            const std::optional<PartialLatinSquare>& P) {
    const int n = model.n;
    if (n < 1) throw InvalidInput("n must be positive");
    if (model.m < 0 || model.m > n) throw InvalidInput("m must lie in [0,n]");
    if (P && P->order() != n) throw InvalidInput("order mismatch");
    AvoidanceArray A(n);
    std::vector<int> pool(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            // Partial Fisher-Yates: the first m entries form a uniform m-subset.
            std::iota(pool.begin(), pool.end(), 1);
            for (int i = 0; i < model.m; ++i) {
                std::uniform_int_distribution<int> pick(i, n - 1);
                std::swap(pool[i], pool[pick(rng)]);
                A.insert(r, c, pool[i]);
            }
            if (P && !P->is_empty(r, c)) A.erase(r, c, P->at(r, c));
        }
    return A;
}

E1Layout e1_layout(int r) {
    E1Layout l;
    l.a0 = 0;
    l.a_size = r + 1;
    l.b0 = r + 1;
    l.b_size = r + 1;
    l.c0 = 2 * r + 2;
    l.c_size = r;
    return l;
}

AvoidanceArray blocked_array_E1(int r, bool literal_c_block) {
    if (r < 1) throw InvalidInput("r must be at least 1");
    const int n = 3 * r + 2;
    const auto l = e1_layout(r);
    AvoidanceArray A(n);
    auto fill = [&](int start, int size, int lo, int hi) {
        for (int i = start; i < start + size; ++i)
            for (int j = start; j < start + size; ++j)
                for (int s = lo; s <= hi; ++s) A.insert(i, j, s);
    };
    fill(l.a0, l.a_size, 1, r + 1);
    fill(l.b0, l.b_size, r + 2, 2 * r + 2);
    fill(l.c0, l.c_size, literal_c_block ? 2 * r + 2 : 2 * r + 3, 3 * r + 2);
    return A;
}

namespace {

// Multiplication in GF(2^a) modulo a fixed primitive polynomial, a <= 16.
int gf2_mul(int x, int y, int a) {
    static const int poly[17] = {0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003, 0x1002d};
    int out = 0;
    while (y) {
        if (y & 1) out ^= x;
        y >>= 1;
        x <<= 1;
        if (x >> a) x ^= poly[a];
    }
    return out;
}

}  // namespace

DecomposedSquare transversal_decomposed_square(const std::vector<int>& symbols) {
    const int s = static_cast<int>(symbols.size());
    if (s < 1) throw InvalidInput("symbol set must be non-empty");
    DecomposedSquare out;
    out.symbols = symbols;
    out.grid.assign(s, std::vector<int>(s, 0));
    out.diagonals.assign(s, {});

    int a = 0, b = s;
    while (b % 2 == 0) {
        b /= 2;
        ++a;
    }
    if (a == 1 || a > 16) {
        // No orthogonal mate available here: cyclic square with broken diagonals.
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                out.grid[i][j] = symbols[(i + j) % s];
                out.diagonals[((j - i) % s + s) % s].push_back({i, j});
            }
        out.transversals = s == 1;
        return out;
    }
    // s = 2^a * b with b odd and a != 1: direct product of GF(2^a) and Z_b.
    // Square (x,y) -> x + y; mate (x,y) -> lambda*x + y with lambda = 2 in
    // each factor (lambda in GF(2^a) is the generator, absent when a = 0).
    const int q = 1 << a;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            const int x2 = i % q, xb = i / q, y2 = j % q, yb = j / q;
            const int sym = (x2 ^ y2) + q * ((xb + yb) % b);
            const int lam2 = a == 0 ? 0 : gf2_mul(2, x2, a);
            const int mate = (lam2 ^ y2) + q * ((2 * xb + yb) % b);
            out.grid[i][j] = symbols[sym];
            out.diagonals[mate].push_back({i, j});
        }
    out.transversals = true;
    return out;
}

InfeasiblePair infeasible_pair(const FrontierPoint& point, bool literal_c_block) {
    const int r = point.r, t = point.t;
    if (r < 1) throw InvalidInput("r must be at least 1");
    if (t < 1 || t > r + 1) throw InvalidInput("t must satisfy 1 <= t <= r+1");
    const int n = 3 * r + 2;
    const auto l = e1_layout(r);
    std::vector<int> S1{r + 2}, S2, S3;
    for (int s = 2 * r + 3; s <= 3 * r + 2; ++s) S1.push_back(s);
    for (int s = 1; s <= r + 1; ++s) S2.push_back(s);
    for (int s = r + 3; s <= 2 * r + 2; ++s) S3.push_back(s);

    InfeasiblePair out{PartialLatinSquare(n), blocked_array_E1(r, literal_c_block)};
    auto place = [&](const std::vector<int>& S, int start) {
        const auto D = transversal_decomposed_square(S);
        // Diagonals beyond |S| stay empty.
        for (int j = 0; j < t && j < static_cast<int>(D.diagonals.size()); ++j)
            for (auto [i, k] : D.diagonals[j]) {
                out.P.set(start + i, start + k, D.grid[i][k]);
                out.A.clear(start + i, start + k);
            }
    };
    place(S1, l.a0);
    place(S2, l.b0);
    place(S3, l.c0);
    return out;
}

}  // namespace rlsc
