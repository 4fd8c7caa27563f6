#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlsc {

// Rows and columns are 0-based. Symbols are 1..n, 0 marks an empty cell.
struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};
class NotAnIntercalate : public Error {
public:
    using Error::Error;
};
class OldMismatch : public Error {
public:
    using Error::Error;
};
class NotLatinAfterTrade : public Error {
public:
    using Error::Error;
};

class PartialLatinSquare {
public:
    PartialLatinSquare() = default;
    explicit PartialLatinSquare(int n);
    static PartialLatinSquare from_rows(const std::vector<std::vector<int>>& rows);

    int order() const { return n_; }
    int at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * n_ + c]; }
    bool is_empty(int r, int c) const { return at(r, c) == 0; }
    void set(int r, int c, int s) { cells_[static_cast<std::size_t>(r) * n_ + c] = s; }
    void clear(int r, int c) { set(r, c, 0); }
    int filled_count() const;

    const std::vector<int>& data() const { return cells_; }
    std::vector<std::vector<int>> rows() const;

    bool operator==(const PartialLatinSquare&) const = default;

private:
    int n_ = 0;
    std::vector<int> cells_;
};

// Always a valid Latin square; the constructors throw InvalidInput otherwise.
class LatinSquare {
public:
    LatinSquare() = default;
    LatinSquare(int n, std::vector<int> cells);
    static LatinSquare from_rows(const std::vector<std::vector<int>>& rows);

    int order() const { return n_; }
    int at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * n_ + c]; }
    const std::vector<int>& data() const { return cells_; }
    std::vector<std::vector<int>> rows() const;
    PartialLatinSquare to_partial() const;

    bool operator==(const LatinSquare&) const = default;

private:
    int n_ = 0;
    std::vector<int> cells_;
};

// Per-cell symbol sets stored as bitsets (bit s for symbol s).
class AvoidanceArray {
public:
    AvoidanceArray() = default;
    explicit AvoidanceArray(int n);

    int order() const { return n_; }
    bool contains(int r, int c, int s) const {
        const std::uint64_t* w = words(r, c);
        return (w[s >> 6] >> (s & 63)) & 1u;
    }
    void insert(int r, int c, int s);
    void erase(int r, int c, int s);
    void clear(int r, int c);
    int size(int r, int c) const;
    std::vector<int> symbols(int r, int c) const;
    int total_size() const;

    bool operator==(const AvoidanceArray&) const = default;

private:
    const std::uint64_t* words(int r, int c) const {
        return bits_.data() + (static_cast<std::size_t>(r) * n_ + c) * stride_;
    }
    std::uint64_t* words(int r, int c) {
        return bits_.data() + (static_cast<std::size_t>(r) * n_ + c) * stride_;
    }

    int n_ = 0;
    int stride_ = 0;
    std::vector<std::uint64_t> bits_;
};

// The four cells {(r1,c1),(r1,c2),(r2,c1),(r2,c2)}.
struct Intercalate {
    int r1 = 0, r2 = 0, c1 = 0, c2 = 0;
    auto operator<=>(const Intercalate&) const = default;
};

struct TradeEntry {
    Cell cell;
    int old_symbol = 0;
    int new_symbol = 0;
    bool operator==(const TradeEntry&) const = default;
};

struct Trade {
    std::vector<TradeEntry> entries;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    bool operator==(const Trade&) const = default;
};

// max(min, floor(num * n / den))
struct LinearFloor {
    long long num = 0;
    long long den = 1;
    long long min = 0;
    long long operator()(long long n) const;
};

enum class FallbackPolicy { Strict, Relaxed, BestEffort };

struct Params {
    double alpha = 1.0 / 100000;
    double beta = 1.0 / 100000;
    double epsilon = 1.0 / 10000;
    double k = 1.0 / 500;
    double d = 1.0 / 20;
    LinearFloor c_of_n{1, 35000, 0};
    LinearFloor f_of_n{1, 17500, 0};
    std::optional<long long> exceptional_cell_budget;  // default 3n+7
    int max_scramble_tries = 200;
    std::uint64_t rng_seed = 0;
    FallbackPolicy fallback_policy = FallbackPolicy::Strict;
    int oracle_threshold = 8;
    int max_restarts = 4;
    int max_passes = 6;

    long long c(int n) const { return c_of_n(n); }
    long long f(int n) const { return f_of_n(n); }
    long long exceptional_budget(int n) const {
        return exceptional_cell_budget.value_or(3LL * n + 7);
    }

    static Params paper();
    static Params desk();
    void validate() const;
};

std::string to_string(FallbackPolicy p);
FallbackPolicy fallback_policy_from_string(const std::string& s);

struct Violation {
    std::string kind;
    Cell cell;
    int symbol = 0;
    bool operator==(const Violation&) const = default;
};

struct Report {
    std::vector<Violation> violations;
    bool clean() const { return violations.empty(); }
};

Report validate_pls(const PartialLatinSquare& P);
bool is_alpha_dense(const PartialLatinSquare& P, double alpha);
bool is_mmm_array(const AvoidanceArray& A, int m1, int m2, int m3);

struct ArrayProfile {
    int max_cell = 0;
    int max_row_occurrence = 0;
    int max_col_occurrence = 0;
};
ArrayProfile array_profile(const AvoidanceArray& A);

struct DensityProfile {
    int max_row = 0;
    int max_col = 0;
    int max_symbol = 0;
};
DensityProfile density_profile(const PartialLatinSquare& P);

std::vector<Cell> conflict_cells(const LatinSquare& L, const AvoidanceArray& A);
std::vector<Cell> prescribed_cells(const PartialLatinSquare& P);

bool is_strong_pair(int n, int s, int t);
bool is_intercalate(const LatinSquare& L, const Intercalate& C);
bool is_strong_intercalate(const LatinSquare& L, const Intercalate& C);
bool is_allowed_intercalate(const LatinSquare& L, const Intercalate& C, const AvoidanceArray& A);
LatinSquare swap_intercalate(const LatinSquare& L, const Intercalate& C);
Trade swap_trade(const LatinSquare& L, const Intercalate& C);
LatinSquare apply_trade(const LatinSquare& L, const Trade& T);
Report verify_solution(const LatinSquare& L, const PartialLatinSquare& P, const AvoidanceArray& A);
// Same checks for a candidate grid that may be incomplete or not Latin.
Report verify_solution(const PartialLatinSquare& candidate, const PartialLatinSquare& P, const AvoidanceArray& A);

// True if every row and column of the n*n grid is a permutation of 1..n.
bool is_latin_grid(int n, const std::vector<int>& cells);

}  // namespace rlsc
