#pragma once

#include <random>
#include <vector>

#include "rlsc/core.hpp"
#include "rlsc/starting.hpp"

namespace rlsc {

// Row permutation sigma and column permutation tau, 0-based. The scrambled
// instance is A'(i,j) = A(sigma[i], tau[j]); a solution L of the scrambled
// instance maps back through out(sigma[i], tau[j]) = L(i,j).
struct Scramble {
    std::vector<int> sigma;
    std::vector<int> tau;
    static Scramble identity(int n);
    bool operator==(const Scramble&) const = default;
};

struct WellBehavedReport {
    long long condition_a_violations = 0;
    int max_row_conflicts = 0;
    int max_col_conflicts = 0;
    int max_symbol_conflicts = 0;
    int max_symbol_prescriptions = 0;
    int max_symbol_pair = 0;
    bool pass = false;
    // Total excess over the bounds; 0 iff pass. Used to rank failed samples.
    long long badness = 0;
};

struct ScrambleResult {
    Scramble scramble;
    AvoidanceArray A;      // A'
    PartialLatinSquare P;  // P'
    WellBehavedReport report;
    int tries = 0;
};

class ScrambleExhausted : public Error {
public:
    ScrambleExhausted(std::string what, ScrambleResult best) : Error(std::move(what)), best_(std::move(best)) {}
    const ScrambleResult& best() const { return best_; }

private:
    ScrambleResult best_;
};

// Allowed strong intercalates of L through each cell, count[r*n+c].
std::vector<int> allowed_strong_census(const LatinSquare& L, const AvoidanceArray& A);

WellBehavedReport check_well_behaved(const StartingSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P,
                                     const Params& params);

Scramble random_scramble(int n, std::mt19937_64& rng);
PartialLatinSquare scramble_pls(const PartialLatinSquare& P, const Scramble& s);
AvoidanceArray scramble_array(const AvoidanceArray& A, const Scramble& s);
LatinSquare scramble_square(const LatinSquare& L, const Scramble& s);
LatinSquare unscramble(const LatinSquare& L, const Scramble& s);

// Throws ScrambleExhausted after params.max_scramble_tries failed samples.
ScrambleResult sample_scramble(const StartingSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P,
                               const Params& params, std::mt19937_64& rng);

}  // namespace rlsc
