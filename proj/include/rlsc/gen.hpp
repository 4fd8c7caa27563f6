#pragma once

#include <optional>
#include <random>
#include <vector>

#include "rlsc/core.hpp"

namespace rlsc {

struct RandomPlsModel {
    int n = 0;
    double p = 0.0;
};

struct RandomArrayModel {
    int n = 0;
    int m = 0;
};

struct FrontierPoint {
    int r = 1;
    int t = 1;
    int n() const { return 3 * r + 2; }
};

// Each cell filled with probability p by a uniform symbol; duplicates in a
// row keep only the largest-column copy, then duplicates in a column keep only
// the largest-row copy.
PartialLatinSquare random_pls(const RandomPlsModel& model, std::mt19937_64& rng);

// Independent uniform m-subsets per cell; entries of P are removed when given.
AvoidanceArray random_array(const RandomArrayModel& model, std::mt19937_64& rng,
                            const std::optional<PartialLatinSquare>& P = std::nullopt);

// Blocks {1..r+1} top-left, {r+2..2r+2} in the middle and an r x r block at the
// bottom right holding {2r+3..3r+2}, or {2r+2..3r+2} when literal_c_block.
AvoidanceArray blocked_array_E1(int r, bool literal_c_block = false);

struct DecomposedSquare {
    std::vector<int> symbols;                  // S, in the given order
    std::vector<std::vector<int>> grid;        // s x s symbols from S
    std::vector<std::vector<Cell>> diagonals;  // s disjoint generalized diagonals covering the grid
    // True when every diagonal carries each symbol of S once. Impossible for s = 2 and s = 6;
    // also false for other s = 2 mod 4, where plain broken diagonals are returned.
    bool transversals = false;
};

DecomposedSquare transversal_decomposed_square(const std::vector<int>& symbols);

struct InfeasiblePair {
    PartialLatinSquare P;  // E^1_t
    AvoidanceArray A;      // E_1t
};

InfeasiblePair infeasible_pair(const FrontierPoint& point, bool literal_c_block = false);

// Tests (or builds) sharing a block layout: first rows/cols of each block.
struct E1Layout {
    int a0 = 0, a_size = 0;  // rows/cols [a0, a0+a_size)
    int b0 = 0, b_size = 0;
    int c0 = 0, c_size = 0;
};
E1Layout e1_layout(int r);

}  // namespace rlsc
