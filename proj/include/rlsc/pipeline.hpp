#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlsc/core.hpp"
#include "rlsc/scramble.hpp"
#include "rlsc/starting.hpp"

namespace rlsc {

class InputClash : public Error {
public:
    using Error::Error;
};

struct PreflightItem {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

struct PreflightReport {
    std::vector<PreflightItem> items;
    bool all_hold() const;
};

// Evaluates every parameter inequality the construction relies on.
PreflightReport preflight(const Params& params, int n);

enum class SolveStatus { Solved, Infeasible, GaveUp };
std::string to_string(SolveStatus s);

struct SolveStats {
    std::string mode;  // "guaranteed", "best-effort", "oracle" or "complete-input"
    bool oracle_used = false;
    long long oracle_nodes = 0;
    int scramble_tries = 0;
    long long scramble_badness = 0;
    int restarts = 0;
    long long q = 0;
    long long fix_calls = 0;
    long long fix_failures = 0;
    long long initial_conflicts = 0;
    long long prescribed_cells = 0;
    long long coloring_f = 0;
    std::vector<std::string> relaxations;
    std::map<std::string, long long> routes;  // trade route -> count
    std::vector<long long> levels;            // trades per relaxation level
    std::map<std::string, double> timings_ms;
};

// Everything needed to rebuild the solution from the starting square.
struct TradeLog {
    int n = 0;
    Scramble scramble;
    std::vector<int> start;  // starting square, row-major
    std::vector<Trade> trades;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::GaveUp;
    std::optional<LatinSquare> square;
    std::string message;
    SolveStats stats;
    std::optional<TradeLog> log;
};

// Completes P avoiding A. Throws InputClash when P and A overlap and
// InvalidInput on malformed inputs; every returned square is verified.
SolveOutcome solve(const PartialLatinSquare& P, const AvoidanceArray& A, const Params& params);

// Applies the logged trades to the starting square and unscrambles.
LatinSquare replay(const TradeLog& log);

}  // namespace rlsc
