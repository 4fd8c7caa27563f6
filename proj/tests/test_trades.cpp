#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "doctest.h"
#include "rlsc/coloring.hpp"
#include "rlsc/gen.hpp"
#include "rlsc/scramble.hpp"
#include "rlsc/trades.hpp"

using namespace rlsc;

namespace {

// Starting square, scramble, colouring and merge on a random desk instance, as the pipeline runs them.
SolverState desk_state(int n, std::uint64_t seed, FallbackPolicy policy = FallbackPolicy::Relaxed) {
    std::mt19937_64 rng(seed);
    const auto P = random_pls({n, 0.03}, rng);
    const auto A = random_array({n, 2}, rng, P);
    Params prm = Params::desk();
    prm.rng_seed = seed;
    prm.fallback_policy = policy;
    const auto L0 = build_starting_square(n);
    ScrambleResult sc;
    try {
        sc = sample_scramble(L0, A, P, prm, rng);
    } catch (const ScrambleExhausted& e) {
        sc = e.best();
    }
    const auto G = build_conflict_graph(L0.square, sc.A, sc.P);
    const auto lists = build_lists(G, sc.A, sc.P);
    const auto colors = list_edge_color_bounded(G, lists, static_cast<int>(prm.f(n)), rng);
    return SolverState(L0, build_R_and_merge(G, colors, sc.P), sc.A, prm);
}

Trade diff(const LatinSquare& a, const LatinSquare& b) {
    Trade T;
    for (int r = 0; r < a.order(); ++r)
        for (int c = 0; c < a.order(); ++c)
            if (a.at(r, c) != b.at(r, c)) T.entries.push_back({{r, c}, a.at(r, c), b.at(r, c)});
    return T;
}

std::set<Cell> conflicts(const SolverState& S) {
    std::set<Cell> out;
    for (int r = 0; r < S.order(); ++r)
        for (int c = 0; c < S.order(); ++c)
            if (S.conflict(r, c)) out.insert({r, c});
    return out;
}

template <class T>
SolverState transpose_state(const SolverState& S) {
    (void)sizeof(T);
    const int n = S.order();
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    PartialLatinSquare P(n);
    AvoidanceArray A(n);
    StartingSquare L0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cells[static_cast<std::size_t>(c) * n + r] = S.start().square.at(r, c);
            P.set(c, r, S.Phat().at(r, c));
            for (int s : S.A().symbols(r, c)) A.insert(c, r, s);
        }
    L0.square = LatinSquare(n, cells);
    for (auto [r, c] : S.start().exceptional_cells) L0.exceptional_cells.push_back({c, r});
    std::sort(L0.exceptional_cells.begin(), L0.exceptional_cells.end());
    L0.r = n / 2;
    return SolverState(L0, P, A, S.params());
}

}  // namespace

TEST_CASE("fresh state and record_trade bookkeeping") {
    Params prm = Params::desk();
    prm.d = 0.25;
    const auto M = build_even(12);
    SolverState S(M, PartialLatinSquare(12), AvoidanceArray(12), prm);
    CHECK(S.audit().empty());
    for (int i = 0; i < 12; ++i) {
        CHECK_FALSE(S.overloaded(Target::Row, i));
        CHECK_FALSE(S.overloaded(Target::Column, i));
        CHECK_FALSE(S.overloaded(Target::Symbol, i + 1));
    }

    S.record_trade(Trade{});
    CHECK(S.q() == 1);
    CHECK(S.disturbed_count() == 0);

    const auto strong = strong_intercalates(M.square);
    const Intercalate C = strong.front();
    const int a = M.square.at(C.r1, C.c1), b = M.square.at(C.r1, C.c2);
    S.record_trade(swap_trade(M.square, C));
    CHECK(S.q() == 2);
    CHECK(S.disturbed_count() == 4);
    CHECK(S.tally(Target::Symbol, a) == 4);
    CHECK(S.tally(Target::Symbol, b) == 4);
    CHECK(S.tally(Target::Row, C.r1) == 2);
    CHECK(S.audit().empty());

    // Two swaps sharing row r1 make one trade touching that row four times; d n = 3.
    const LatinSquare L1 = S.square();
    const Intercalate* other = nullptr;
    for (const auto& D : strong_intercalates(L1))
        if ((D.r1 == C.r1 || D.r2 == C.r1) && D.c1 != C.c1 && D.c1 != C.c2 && D.c2 != C.c1 && D.c2 != C.c2) {
            other = &D;
            break;
        }
    REQUIRE(other != nullptr);
    const Intercalate D = *other;
    auto L2 = swap_intercalate(L1, D);
    S.record_trade(diff(L1, L2));
    CHECK(S.tally(Target::Row, C.r1) == 4);
    CHECK(S.overloaded(Target::Row, C.r1));
    CHECK(S.audit().empty());

    Trade bad = swap_trade(S.square(), strong_intercalates(S.square()).front());
    bad.entries[0].old_symbol = bad.entries[0].new_symbol;
    CHECK_THROWS(S.record_trade(bad));
    Trade broken{{{{0, 0}, S.at(0, 0), S.at(0, 1)}}};
    CHECK_THROWS_AS(S.record_trade(broken), NotLatinAfterTrade);
    CHECK(S.audit().empty());
}

TEST_CASE("exchange premise under the strict policy") {
    Params prm = Params::desk();
    prm.fallback_policy = FallbackPolicy::Strict;
    SolverState S(build_even(2), PartialLatinSquare(2), AvoidanceArray(2), prm);
    CHECK_THROWS_AS(row_exchange(S, 0, 0, 1, {}), FeasibilityUnmet);
    CHECK_THROWS_AS(column_exchange(S, 0, 0, 1, {}), FeasibilityUnmet);
    CHECK(exchange_margin(prm, 2, 0) < 6);
}

TEST_CASE("exchange inside an intercalate is that swap") {
    const auto M = build_even(20);
    Params prm = Params::desk();
    SolverState S(M, PartialLatinSquare(20), AvoidanceArray(20), prm);
    for (const auto& C : strong_intercalates(M.square)) {
        if (C.r1 != 3) continue;
        const auto res = row_exchange(S, C.r1, C.c1, C.c2, {});
        CHECK(res.route == "intercalate");
        CHECK(res.trade == swap_trade(M.square, C));
        CHECK(res.level == 0);
    }
}

TEST_CASE("exchange postconditions on desk states") {
    long long done = 0, cells = 0;
    std::map<std::string, int> routes;
    for (int n : {40, 60}) {
        auto S = desk_state(n, 100 + n);
        std::mt19937_64 rng(n);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int it = 0; it < 300; ++it) {
            const int line = pick(rng), a = pick(rng), b = pick(rng);
            if (a == b) continue;
            const bool col = it % 2 == 1;
            ExchangeRequest req;
            req.avoid_symbols = {pick(rng) + 1, pick(rng) + 1};
            if (col ? S.prescribed(a, line) || S.prescribed(b, line) : S.prescribed(line, a) || S.prescribed(line, b))
                continue;
            TradeResult res;
            try {
                res = col ? column_exchange(S, line, a, b, req) : row_exchange(S, line, a, b, req);
            } catch (const NoValidColumns&) {
                continue;
            }
            const auto chk = col ? check_column_exchange(S, res.trade, line, a, b, req)
                                 : check_row_exchange(S, res.trade, line, a, b, req);
            CHECK(chk.hard.empty());
            CHECK(chk.ok(res.level));
            CHECK(res.trade.size() <= 16);
            const auto before = conflicts(S);
            const Cell x = col ? Cell{a, line} : Cell{line, a}, y = col ? Cell{b, line} : Cell{line, b};
            const int sx = S.at(x.row, x.col), sy = S.at(y.row, y.col);
            S.record_trade(res.trade);
            CHECK(S.at(x.row, x.col) == sy);
            CHECK(S.at(y.row, y.col) == sx);
            const auto after = conflicts(S);
            CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
            ++done;
            cells += static_cast<long long>(res.trade.size());
            ++routes[res.route];
        }
        CHECK(S.audit().empty());
    }
    MESSAGE("exchanges: " << done << ", mean size " << (done ? double(cells) / done : 0.0));
    CHECK(done >= 100);
    CHECK(routes.count("case1") + routes.count("case2") > 0);
}

TEST_CASE("column exchange is the transposed row exchange") {
    auto S = desk_state(40, 7);
    const auto T = transpose_state<int>(S);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 39);
    int compared = 0;
    for (int it = 0; it < 200; ++it) {
        const int line = pick(rng), a = pick(rng), b = pick(rng);
        if (a == b) continue;
        std::optional<Trade> x, y;
        try {
            x = column_exchange(S, line, a, b, {}).trade;
        } catch (const Error&) {
        }
        try {
            y = row_exchange(T, line, a, b, {}).trade;
        } catch (const Error&) {
        }
        REQUIRE(x.has_value() == y.has_value());
        if (!x) continue;
        for (auto& e : y->entries) std::swap(e.cell.row, e.cell.col);
        std::sort(y->entries.begin(), y->entries.end(),
                  [](const TradeEntry& p, const TradeEntry& q) { return p.cell < q.cell; });
        CHECK(*x == *y);
        ++compared;
    }
    CHECK(compared > 50);
}

TEST_CASE("fix_cell preconditions") {
    auto S = desk_state(40, 1);
    int checked = 0;
    for (int r = 0; r < 40 && checked < 3; ++r)
        for (int c = 0; c < 40; ++c)
            if (!S.prescribed(r, c)) {
                CHECK_THROWS_AS(fix_cell(S, {r, c}), InvalidInput);
                ++checked;
                break;
            }
    Params strict = S.params();
    strict.fallback_policy = FallbackPolicy::Strict;
    SolverState St(S.start(), S.Phat(), S.A(), strict);
    for (int r = 0; r < 40; ++r)
        for (int c = 0; c < 40; ++c)
            if (St.prescribed(r, c) && !St.fixed(r, c)) {
                CHECK_THROWS_AS(fix_cell(St, {r, c}), FeasibilityUnmet);
                return;
            }
}

TEST_CASE("fix_cell postconditions on desk states") {
    long long done = 0, failures = 0, max_size = 0;
    std::map<std::string, int> routes;
    for (std::uint64_t seed : {11, 12, 13}) {
        for (bool shortcuts : {false, true}) {
            auto S = desk_state(50 + 10 * static_cast<int>(seed % 3), seed);
            const int n = S.order();
            FixOptions opt;
            opt.shortcuts = shortcuts;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    if (!S.prescribed(r, c) || S.fixed(r, c)) continue;
                    const long long fixed_before = S.fixed_count();
                    std::vector<Cell> fixed_cells;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            if (S.fixed(i, j)) fixed_cells.push_back({i, j});
                    const auto before = conflicts(S);
                    TradeResult res;
                    try {
                        res = fix_cell(S, {r, c}, opt);
                    } catch (const Error&) {
                        ++failures;
                        continue;
                    }
                    CHECK(check_fix_cell(S, res.trade, {r, c}).ok(res.level));
                    CHECK(res.trade.size() <= 69);
                    max_size = std::max<long long>(max_size, static_cast<long long>(res.trade.size()));
                    S.record_trade(res.trade);
                    CHECK(S.fixed(r, c));
                    CHECK(S.fixed_count() > fixed_before);
                    for (auto [i, j] : fixed_cells) CHECK(S.fixed(i, j));
                    const auto after = conflicts(S);
                    CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
                    ++done;
                    ++routes[res.route];
                }
            CHECK(S.audit().empty());
        }
    }
    MESSAGE("fix_cell: " << done << " ok, " << failures << " failed, largest trade " << max_size);
    CHECK(routes["composite"] > 50);
    CHECK(done >= 200);
}

TEST_CASE("margins") {
    const Params paper = Params::paper();
    // The premise fails at the paper-profile constants because 6dn + 5(k/d)n exceeds n/2.
    CHECK(exchange_margin(paper, 1000000, 2) < 6);
    CHECK(fix_margin(paper, 1000000) < 0);
    CHECK(max_level(FallbackPolicy::Strict) == 0);
    CHECK(max_level(FallbackPolicy::Relaxed) == 2);
    CHECK(max_level(FallbackPolicy::BestEffort) == 3);
}
