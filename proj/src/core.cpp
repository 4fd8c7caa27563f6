#include "rlsc/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace rlsc {

namespace {

int checked_order(const std::vector<std::vector<int>>& rows) {
    const int n = static_cast<int>(rows.size());
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw InvalidInput("grid is not square");
    }
    return n;
}

std::vector<std::vector<int>> to_rows(int n, const std::vector<int>& cells) {
    std::vector<std::vector<int>> out(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out[r][c] = cells[static_cast<std::size_t>(r) * n + c];
    return out;
}

// Fraction bound "count <= x * n" with a little slack for binary rounding.
bool within(long long count, double x, int n) { return count <= x * n + 1e-9; }

}  // namespace

PartialLatinSquare::PartialLatinSquare(int n) : n_(n), cells_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw InvalidInput("negative order");
}

PartialLatinSquare PartialLatinSquare::from_rows(const std::vector<std::vector<int>>& rows) {
    const int n = checked_order(rows);
    PartialLatinSquare P(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int s = rows[r][c];
            if (s < 0 || s > n) throw InvalidInput("symbol out of range");
            P.set(r, c, s);
        }
    return P;
}

int PartialLatinSquare::filled_count() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](int s) { return s != 0; }));
}

std::vector<std::vector<int>> PartialLatinSquare::rows() const { return to_rows(n_, cells_); }

bool is_latin_grid(int n, const std::vector<int>& cells) {
    if (cells.size() != static_cast<std::size_t>(n) * n) return false;
    std::vector<char> seen(static_cast<std::size_t>(n) + 1);
    for (int line = 0; line < 2 * n; ++line) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int s = line < n ? cells[static_cast<std::size_t>(line) * n + i]
                                   : cells[static_cast<std::size_t>(i) * n + (line - n)];
            if (s < 1 || s > n || seen[s]) return false;
            seen[s] = 1;
        }
    }
    return true;
}

LatinSquare::LatinSquare(int n, std::vector<int> cells) : n_(n), cells_(std::move(cells)) {
    if (!is_latin_grid(n_, cells_)) throw InvalidInput("grid is not a Latin square");
}

LatinSquare LatinSquare::from_rows(const std::vector<std::vector<int>>& rows) {
    const int n = checked_order(rows);
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) cells.insert(cells.end(), row.begin(), row.end());
    return LatinSquare(n, std::move(cells));
}

std::vector<std::vector<int>> LatinSquare::rows() const { return to_rows(n_, cells_); }

PartialLatinSquare LatinSquare::to_partial() const { return PartialLatinSquare::from_rows(rows()); }

AvoidanceArray::AvoidanceArray(int n)
    : n_(n), stride_(n / 64 + 1), bits_(static_cast<std::size_t>(n) * n * (n / 64 + 1), 0) {
    if (n < 0) throw InvalidInput("negative order");
}

void AvoidanceArray::insert(int r, int c, int s) {
    if (s < 1 || s > n_) throw InvalidInput("symbol out of range");
    words(r, c)[s >> 6] |= std::uint64_t{1} << (s & 63);
}

void AvoidanceArray::erase(int r, int c, int s) {
    if (s < 1 || s > n_) return;
    words(r, c)[s >> 6] &= ~(std::uint64_t{1} << (s & 63));
}

void AvoidanceArray::clear(int r, int c) { std::fill_n(words(r, c), stride_, 0); }

int AvoidanceArray::size(int r, int c) const {
    int total = 0;
    for (int i = 0; i < stride_; ++i) total += std::popcount(words(r, c)[i]);
    return total;
}

std::vector<int> AvoidanceArray::symbols(int r, int c) const {
    std::vector<int> out;
    for (int s = 1; s <= n_; ++s)
        if (contains(r, c, s)) out.push_back(s);
    return out;
}

int AvoidanceArray::total_size() const {
    int total = 0;
    for (auto w : bits_) total += std::popcount(w);
    return total;
}

long long LinearFloor::operator()(long long n) const {
    if (den <= 0) throw InvalidInput("LinearFloor denominator must be positive");
    const long long v = num * n / den;
    return std::max(min, v);
}

Params Params::paper() { return Params{}; }

Params Params::desk() {
    Params p;
    p.alpha = 1.0 / 20;
    p.beta = 1.0 / 20;
    p.epsilon = 1.0 / 10;
    p.d = 1.0 / 4;
    p.k = 1.0 / 10;
    p.c_of_n = {1, 20, 1};
    p.f_of_n = {1, 10, 1};
    p.fallback_policy = FallbackPolicy::BestEffort;
    return p;
}

void Params::validate() const {
    for (double x : {alpha, beta, epsilon, k, d})
        if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("fractional parameters must lie in [0,1]");
    if (c_of_n.den <= 0 || f_of_n.den <= 0) throw InvalidInput("slope denominators must be positive");
    if (max_scramble_tries < 1) throw InvalidInput("max_scramble_tries must be positive");
}

std::string to_string(FallbackPolicy p) {
    switch (p) {
        case FallbackPolicy::Strict: return "strict";
        case FallbackPolicy::Relaxed: return "relaxed";
        case FallbackPolicy::BestEffort: return "best-effort";
    }
    return "strict";
}

FallbackPolicy fallback_policy_from_string(const std::string& s) {
    if (s == "strict") return FallbackPolicy::Strict;
    if (s == "relaxed") return FallbackPolicy::Relaxed;
    if (s == "best-effort") return FallbackPolicy::BestEffort;
    throw InvalidInput("unknown fallback policy: " + s);
}

Report validate_pls(const PartialLatinSquare& P) {
    const int n = P.order();
    Report rep;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int s = P.at(r, c);
            if (s < 0 || s > n) rep.violations.push_back({"symbol_range", {r, c}, s});
        }
    std::vector<int> first(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r < n; ++r) {
        std::fill(first.begin(), first.end(), -1);
        for (int c = 0; c < n; ++c) {
            const int s = P.at(r, c);
            if (s < 1 || s > n) continue;
            if (first[s] >= 0) rep.violations.push_back({"row_duplicate", {r, c}, s});
            else first[s] = c;
        }
    }
    for (int c = 0; c < n; ++c) {
        std::fill(first.begin(), first.end(), -1);
        for (int r = 0; r < n; ++r) {
            const int s = P.at(r, c);
            if (s < 1 || s > n) continue;
            if (first[s] >= 0) rep.violations.push_back({"col_duplicate", {r, c}, s});
            else first[s] = r;
        }
    }
    return rep;
}

DensityProfile density_profile(const PartialLatinSquare& P) {
    const int n = P.order();
    std::vector<int> rows(n), cols(n), syms(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int s = P.at(r, c);
            if (s == 0) continue;
            ++rows[r];
            ++cols[c];
            ++syms[s];
        }
    DensityProfile out;
    for (int v : rows) out.max_row = std::max(out.max_row, v);
    for (int v : cols) out.max_col = std::max(out.max_col, v);
    for (int v : syms) out.max_symbol = std::max(out.max_symbol, v);
    return out;
}

bool is_alpha_dense(const PartialLatinSquare& P, double alpha) {
    const auto d = density_profile(P);
    const int n = P.order();
    return within(d.max_row, alpha, n) && within(d.max_col, alpha, n) && within(d.max_symbol, alpha, n);
}

ArrayProfile array_profile(const AvoidanceArray& A) {
    const int n = A.order();
    ArrayProfile out;
    std::vector<int> count(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r < n; ++r) {
        std::fill(count.begin(), count.end(), 0);
        for (int c = 0; c < n; ++c) {
            out.max_cell = std::max(out.max_cell, A.size(r, c));
            for (int s : A.symbols(r, c)) out.max_row_occurrence = std::max(out.max_row_occurrence, ++count[s]);
        }
    }
    for (int c = 0; c < n; ++c) {
        std::fill(count.begin(), count.end(), 0);
        for (int r = 0; r < n; ++r)
            for (int s : A.symbols(r, c)) out.max_col_occurrence = std::max(out.max_col_occurrence, ++count[s]);
    }
    return out;
}

bool is_mmm_array(const AvoidanceArray& A, int m1, int m2, int m3) {
    const auto p = array_profile(A);
    return p.max_cell <= m1 && p.max_row_occurrence <= m2 && p.max_col_occurrence <= m3;
}

std::vector<Cell> conflict_cells(const LatinSquare& L, const AvoidanceArray& A) {
    if (L.order() != A.order()) throw InvalidInput("order mismatch");
    std::vector<Cell> out;
    const int n = L.order();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (A.contains(r, c, L.at(r, c))) out.push_back({r, c});
    return out;
}

std::vector<Cell> prescribed_cells(const PartialLatinSquare& P) {
    std::vector<Cell> out;
    const int n = P.order();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (!P.is_empty(r, c)) out.push_back({r, c});
    return out;
}

bool is_strong_pair(int n, int s, int t) { return (s <= n / 2) != (t <= n / 2); }

bool is_intercalate(const LatinSquare& L, const Intercalate& C) {
    const int n = L.order();
    auto ok = [n](int x) { return x >= 0 && x < n; };
    if (!ok(C.r1) || !ok(C.r2) || !ok(C.c1) || !ok(C.c2)) return false;
    if (C.r1 == C.r2 || C.c1 == C.c2) return false;
    return L.at(C.r1, C.c1) == L.at(C.r2, C.c2) && L.at(C.r1, C.c2) == L.at(C.r2, C.c1);
}

bool is_strong_intercalate(const LatinSquare& L, const Intercalate& C) {
    if (!is_intercalate(L, C)) throw NotAnIntercalate("cells do not form an intercalate");
    return is_strong_pair(L.order(), L.at(C.r1, C.c1), L.at(C.r1, C.c2));
}

bool is_allowed_intercalate(const LatinSquare& L, const Intercalate& C, const AvoidanceArray& A) {
    if (!is_intercalate(L, C)) throw NotAnIntercalate("cells do not form an intercalate");
    const int a = L.at(C.r1, C.c1), b = L.at(C.r1, C.c2);
    return !A.contains(C.r1, C.c1, b) && !A.contains(C.r2, C.c2, b) && !A.contains(C.r1, C.c2, a) &&
           !A.contains(C.r2, C.c1, a);
}

Trade swap_trade(const LatinSquare& L, const Intercalate& C) {
    if (!is_intercalate(L, C)) throw NotAnIntercalate("cells do not form an intercalate");
    const int a = L.at(C.r1, C.c1), b = L.at(C.r1, C.c2);
    Trade t;
    t.entries = {{{C.r1, C.c1}, a, b}, {{C.r1, C.c2}, b, a}, {{C.r2, C.c1}, b, a}, {{C.r2, C.c2}, a, b}};
    return t;
}

LatinSquare swap_intercalate(const LatinSquare& L, const Intercalate& C) {
    return apply_trade(L, swap_trade(L, C));
}

LatinSquare apply_trade(const LatinSquare& L, const Trade& T) {
    const int n = L.order();
    std::vector<int> cells = L.data();
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    for (const auto& e : T.entries) {
        const auto [r, c] = e.cell;
        if (r < 0 || r >= n || c < 0 || c >= n) throw InvalidInput("trade cell out of range");
        const std::size_t idx = static_cast<std::size_t>(r) * n + c;
        if (seen[idx]) throw InvalidInput("trade repeats a cell");
        seen[idx] = 1;
        if (L.at(r, c) != e.old_symbol) throw OldMismatch("trade old symbol does not match square");
        if (e.old_symbol == e.new_symbol) throw InvalidInput("trade entry does not change its cell");
        cells[idx] = e.new_symbol;
    }
    if (!is_latin_grid(n, cells)) throw NotLatinAfterTrade("trade breaks the Latin property");
    return LatinSquare(n, std::move(cells));
}

namespace {

Report verify_cells(int n, const std::vector<int>& cells, const PartialLatinSquare& P, const AvoidanceArray& A) {
    Report rep;
    if (P.order() != n || A.order() != n) {
        rep.violations.push_back({"order_mismatch", {0, 0}, 0});
        return rep;
    }
    auto at = [&](int r, int c) { return cells[static_cast<std::size_t>(r) * n + c]; };
    std::vector<int> seen(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r < n; ++r) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int c = 0; c < n; ++c) {
            const int s = at(r, c);
            if (s == 0) rep.violations.push_back({"empty_cell", {r, c}, 0});
            else if (s < 1 || s > n) rep.violations.push_back({"symbol_range", {r, c}, s});
            else if (seen[s]++) rep.violations.push_back({"row_duplicate", {r, c}, s});
        }
    }
    for (int c = 0; c < n; ++c) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int r = 0; r < n; ++r) {
            const int s = at(r, c);
            if (s >= 1 && s <= n && seen[s]++) rep.violations.push_back({"col_duplicate", {r, c}, s});
        }
    }
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int s = at(r, c);
            if (!P.is_empty(r, c) && P.at(r, c) != s) rep.violations.push_back({"completion", {r, c}, s});
            if (s >= 1 && s <= n && A.contains(r, c, s)) rep.violations.push_back({"conflict", {r, c}, s});
        }
    return rep;
}

}  // namespace

Report verify_solution(const LatinSquare& L, const PartialLatinSquare& P, const AvoidanceArray& A) {
    return verify_cells(L.order(), L.data(), P, A);
}

Report verify_solution(const PartialLatinSquare& candidate, const PartialLatinSquare& P, const AvoidanceArray& A) {
    return verify_cells(candidate.order(), candidate.data(), P, A);
}

}  // namespace rlsc
