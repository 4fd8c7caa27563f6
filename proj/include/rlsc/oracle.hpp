#pragma once

#include <optional>

#include "rlsc/core.hpp"

namespace rlsc {

struct SearchLimits {
    long long max_nodes = 200'000'000;
    long long max_solutions = 1;  // count_exact stops (with LimitHit) beyond this
};

class LimitHit : public Error {
public:
    LimitHit(const std::string& what, long long nodes) : Error(what), nodes_(nodes) {}
    long long nodes() const { return nodes_; }

private:
    long long nodes_;
};

enum class ExactStatus { Solved, Infeasible, LimitHit };

struct ExactResult {
    ExactStatus status = ExactStatus::Infeasible;
    std::optional<LatinSquare> square;
    long long nodes = 0;
};

// Largest order the oracle accepts (symbol sets are 64-bit masks).
inline constexpr int kOracleMaxOrder = 63;

// Exhaustive search for a completion of P avoiding A. Deterministic.
ExactResult solve_exact(const PartialLatinSquare& P, const AvoidanceArray& A, const SearchLimits& limits = {});

// Number of completions of P avoiding A. Throws LimitHit when the node
// budget runs out or the count exceeds limits.max_solutions.
long long count_exact(const PartialLatinSquare& P, const AvoidanceArray& A, const SearchLimits& limits);

}  // namespace rlsc
