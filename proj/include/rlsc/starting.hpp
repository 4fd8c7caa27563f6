#pragma once

#include <vector>

#include "rlsc/core.hpp"

namespace rlsc {

class OddOrder : public Error {
public:
    using Error::Error;
};
class EvenOrder : public Error {
public:
    using Error::Error;
};
class ConstructionFailed : public Error {
public:
    using Error::Error;
};

struct StartingSquare {
    LatinSquare square;
    std::vector<Cell> exceptional_cells;  // sorted
    int r = 0;                            // floor(n/2)
    // Every non-exceptional cell lies in at least this many strong intercalates.
    int certified_count = 0;
};

// Deficit below floor(n/2) tolerated for non-exceptional cells of odd orders.
inline constexpr int kOddCensusDeficit = 4;

StartingSquare build_even(int n);
StartingSquare build_odd(int n);
StartingSquare build_starting_square(int n);

// count[r*n + c] = number of strong intercalates of L through (r,c).
std::vector<int> strong_intercalate_census(const LatinSquare& L);

// All strong intercalates with r1 < r2 and c1 < c2.
std::vector<Intercalate> strong_intercalates(const LatinSquare& L);

// Rows r with r < floor(n/2) form the upper half.
inline bool upper_half(int n, int row) { return row < n / 2; }

}  // namespace rlsc
