#pragma once

#include <random>
#include <vector>

#include "rlsc/core.hpp"

namespace rlsc::testing {

// Uniformly shuffled cyclic square: random row, column and symbol permutations.
inline LatinSquare random_isotope_of_cyclic(int n, std::mt19937_64& rng) {
    std::vector<int> rp(n), cp(n), sp(n);
    for (int i = 0; i < n; ++i) rp[i] = cp[i] = sp[i] = i;
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    std::shuffle(sp.begin(), sp.end(), rng);
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) cells[static_cast<std::size_t>(rp[r]) * n + cp[c]] = sp[(r + c) % n] + 1;
    return LatinSquare(n, std::move(cells));
}

// Random walk of intercalate swaps, giving squares that are not isotopic to cyclic ones.
inline LatinSquare scramble_by_swaps(LatinSquare L, int steps, std::mt19937_64& rng) {
    const int n = L.order();
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < steps; ++i) {
        const int r1 = pick(rng), c1 = pick(rng), c2 = pick(rng);
        if (c1 == c2) continue;
        int r2 = -1;
        for (int r = 0; r < n; ++r)
            if (L.at(r, c1) == L.at(r1, c2)) r2 = r;
        Intercalate C{r1, r2, c1, c2};
        if (is_intercalate(L, C)) L = swap_intercalate(L, C);
    }
    return L;
}

// Naive count of strong intercalates through each cell.
inline std::vector<int> naive_census(const LatinSquare& L) {
    const int n = L.order();
    std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = r1 + 1; r2 < n; ++r2)
            for (int c1 = 0; c1 < n; ++c1)
                for (int c2 = c1 + 1; c2 < n; ++c2) {
                    Intercalate C{r1, r2, c1, c2};
                    if (!is_intercalate(L, C) || !is_strong_intercalate(L, C)) continue;
                    for (int r : {r1, r2})
                        for (int c : {c1, c2}) ++count[static_cast<std::size_t>(r) * n + c];
                }
    return count;
}

}  // namespace rlsc::testing
