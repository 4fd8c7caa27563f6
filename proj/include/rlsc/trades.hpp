#pragma once

#include <random>
#include <string>
#include <vector>

#include "rlsc/core.hpp"
#include "rlsc/starting.hpp"

namespace rlsc {

class NoValidColumns : public Error {
public:
    using Error::Error;
};
class FeasibilityUnmet : public Error {
public:
    using Error::Error;
};
class NoValidDonorCell : public Error {
public:
    using Error::Error;
};
class NoAuxSymbol : public Error {
public:
    using Error::Error;
};
class TradeInfeasible : public Error {
public:
    using Error::Error;
};

enum class Target { Row, Column, Symbol };

// Bookkeeping for the trade loop. The current square is held as a grid with position
// indices so trades apply in time proportional to their size.
class SolverState {
public:
    SolverState(StartingSquare L0, PartialLatinSquare Phat, AvoidanceArray A, Params params);

    int order() const { return n_; }
    const StartingSquare& start() const { return L0_; }
    const PartialLatinSquare& Phat() const { return Phat_; }
    const AvoidanceArray& A() const { return A_; }
    const Params& params() const { return params_; }
    std::mt19937_64& rng() { return rng_; }

    int at(int r, int c) const { return grid_[idx(r, c)]; }
    int col_of(int r, int s) const { return col_of_[static_cast<std::size_t>(r) * (n_ + 1) + s]; }
    int row_of(int c, int s) const { return row_of_[static_cast<std::size_t>(c) * (n_ + 1) + s]; }
    LatinSquare square() const { return LatinSquare(n_, grid_); }

    bool disturbed(int r, int c) const { return disturbed_[idx(r, c)] != 0; }
    long long disturbed_count() const { return disturbed_total_; }
    bool prescribed(int r, int c) const { return !Phat_.is_empty(r, c); }
    bool fixed(int r, int c) const { return prescribed(r, c) && Phat_.at(r, c) == at(r, c); }
    long long fixed_count() const { return fixed_total_; }
    long long prescribed_count() const { return prescribed_total_; }
    bool conflict(int r, int c) const { return A_.contains(r, c, at(r, c)); }

    long long tally(Target t, int index) const;
    bool overloaded(Target t, int index) const { return tally(t, index) > params_.d * n_; }
    // Prescribed cells currently holding s; disturbed cells currently holding s.
    long long prescribed_with_symbol(int s) const { return presc_by_sym_[s]; }
    long long disturbed_with_symbol(int s) const { return dist_by_sym_[s]; }

    long long q() const { return q_; }
    const std::vector<Trade>& log() const { return log_; }

    // Applies T (throws OldMismatch / NotLatinAfterTrade, leaving the state
    // unchanged), marks its cells disturbed and updates all tallies.
    void record_trade(const Trade& T);

    // Reapplies T to the grid only, or undoes it; used for tentative composition.
    void push(const Trade& T);
    void pop(const Trade& T);

    // Empty when every bookkeeping invariant matches a recount from scratch.
    std::string audit() const;

private:
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * n_ + c; }
    void write(int r, int c, int s);
    void check_applicable(const Trade& T) const;

    int n_;
    StartingSquare L0_;
    PartialLatinSquare Phat_;
    AvoidanceArray A_;
    Params params_;
    std::mt19937_64 rng_;

    std::vector<int> grid_, col_of_, row_of_;
    std::vector<char> disturbed_;
    long long disturbed_total_ = 0;
    std::vector<long long> tally_row_, tally_col_, tally_sym_;
    std::vector<long long> presc_by_sym_, dist_by_sym_;
    long long fixed_total_ = 0, prescribed_total_ = 0;
    long long q_ = 0;
    std::vector<Trade> log_;
};

struct ExchangeRequest {
    std::vector<int> avoid_symbols;     // t_1..t_a
    std::vector<Cell> protected_cells;  // cells the trade must not touch
};

// Relaxation levels. 0 applies every filter. 1 drops the
// overload filters. 2 also drops disturbance, strength and half filters.
// 3 adds cycle-switch trades. Hard postconditions apply at every level.
inline constexpr int kMaxLevel = 3;
int max_level(FallbackPolicy p);

struct TradeResult {
    Trade trade;
    int level = 0;
    std::string route;  // "intercalate", "case1", "case2", "cycle-lines", "cycle-symbols", "composite", ...
};

struct PostconditionCheck {
    std::vector<std::string> hard;  // always fatal
    std::vector<std::string> soft;  // overload bullets, tolerated above level 0
    bool ok(int level) const { return hard.empty() && (level > 0 || soft.empty()); }
};

// Left side of the exchange premise with a avoided symbols.
double exchange_margin(const Params& p, int n, int a);
// Left side of the fix-cell premise minus its right side 1.
double fix_margin(const Params& p, int n);

// Exchanges the contents of (r1,c1) and (r1,c2), trying levels 0..max_level(policy).
// Strict policy throws FeasibilityUnmet when the premise fails.
TradeResult row_exchange(const SolverState& S, int r1, int c1, int c2, const ExchangeRequest& req);
// Exchanges the contents of (r1,c1) and (r2,c1).
TradeResult column_exchange(const SolverState& S, int c1, int r1, int r2, const ExchangeRequest& req);

PostconditionCheck check_row_exchange(const SolverState& S, const Trade& T, int r1, int c1, int c2,
                                      const ExchangeRequest& req);
PostconditionCheck check_column_exchange(const SolverState& S, const Trade& T, int c1, int r1, int r2,
                                         const ExchangeRequest& req);

struct FixOptions {
    bool shortcuts = true;  // try a direct intercalate before the composite construction
    int max_donors = 0;     // 0 means all
    int max_aux = 24;       // auxiliary symbols tried per donor and side
};

// Makes the prescribed cell agree with P-hat. The state is left unchanged;
// apply the result with record_trade.
TradeResult fix_cell(SolverState& S, Cell cell, const FixOptions& opt = {});

PostconditionCheck check_fix_cell(const SolverState& S, const Trade& T, Cell cell);

}  // namespace rlsc
