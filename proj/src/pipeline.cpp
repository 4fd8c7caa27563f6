#include "rlsc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rlsc/coloring.hpp"
#include "rlsc/oracle.hpp"
#include "rlsc/trades.hpp"

namespace rlsc {

bool PreflightReport::all_hold() const {
    return std::all_of(items.begin(), items.end(), [](const PreflightItem& i) { return i.holds; });
}

PreflightReport preflight(const Params& p, int n) {
    PreflightReport rep;
    const double N = n, c = p.c(n), f = p.f(n);
    auto add = [&](std::string name, double lhs, double rhs, bool holds) {
        rep.items.push_back({std::move(name), lhs, rhs, holds});
    };
    const double ex = exchange_margin(p, n, 2);
    add("row-exchange", ex, 6, ex > 6);
    add("column-exchange", ex, 6, ex > 6);
    const double fx = fix_margin(p, n) + 1;
    add("fix-cell", fx, 1, fx > 1);
    const double col = f >= 1 ? N - p.beta * N - 2 * p.alpha * N - 2 * c - N * c / f : -INFINITY;
    add("coloring", col, 1, col >= 1);
    const double list = N - p.beta * N - 2 * p.alpha * N;
    add("galvin", c, list, c <= list);
    add("disturbance-budget", p.k * N * N, 69 * N * (p.alpha * N + c), p.k * N * N >= 69 * N * (p.alpha * N + c));
    return rep;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "solved";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::GaveUp: return "gave-up";
    }
    return "?";
}

LatinSquare replay(const TradeLog& log) {
    LatinSquare L(log.n, log.start);
    for (const auto& T : log.trades) L = apply_trade(L, T);
    return unscramble(L, log.scramble);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Every cell exceptional: soundness never depends on the census.
StartingSquare cyclic_start(int n) {
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    StartingSquare S;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            cells[static_cast<std::size_t>(r) * n + c] = (r + c) % n + 1;
            S.exceptional_cells.push_back({r, c});
        }
    S.square = LatinSquare(n, std::move(cells));
    S.r = n / 2;
    return S;
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

SolveOutcome solve(const PartialLatinSquare& P, const AvoidanceArray& A, const Params& params) {
    params.validate();
    const int n = P.order();
    if (n < 1) throw InvalidInput("order must be positive");
    if (A.order() != n) throw InvalidInput("order mismatch");
    if (!validate_pls(P).clean()) throw InvalidInput("P is not a partial Latin square");
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (!P.is_empty(r, c) && A.contains(r, c, P.at(r, c)))
                throw InputClash("P(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") is forbidden by A");

    SolveOutcome out;
    auto& st = out.stats;
    st.levels.assign(kMaxLevel + 1, 0);
    const auto t_all = Clock::now();
    const bool strict = params.fallback_policy == FallbackPolicy::Strict;

    if (P.filled_count() == n * n) {
        // Nothing to complete; the clash check above already covers A.
        st.mode = "complete-input";
        out.status = SolveStatus::Solved;
        out.square = LatinSquare(n, P.data());
        out.log = TradeLog{n, Scramble::identity(n), P.data(), {}};
        st.timings_ms["total"] = ms_since(t_all);
        return out;
    }

    if (n <= params.oracle_threshold && n <= kOracleMaxOrder) {
        st.mode = "oracle";
        st.oracle_used = true;
        const auto t0 = Clock::now();
        const auto res = solve_exact(P, A);
        st.timings_ms["oracle"] = ms_since(t0);
        st.oracle_nodes = res.nodes;
        if (res.status == ExactStatus::Solved) {
            out.status = SolveStatus::Solved;
            out.square = res.square;
        } else if (res.status == ExactStatus::Infeasible) {
            out.status = SolveStatus::Infeasible;
            out.message = "exhaustive search found no completion";
        } else {
            out.status = SolveStatus::GaveUp;
            out.message = "exhaustive search hit its node limit";
        }
        st.timings_ms["total"] = ms_since(t_all);
        return out;
    }

    st.mode = preflight(params, n).all_hold() ? "guaranteed" : "best-effort";
    const long long fix_budget =
        static_cast<long long>(n) * static_cast<long long>(std::floor(params.alpha * n) + params.c(n));

    auto t0 = Clock::now();
    StartingSquare L0;
    try {
        L0 = build_starting_square(n);
    } catch (const ConstructionFailed& e) {
        if (strict) {
            out.message = e.what();
            return out;
        }
        L0 = cyclic_start(n);
        st.relaxations.push_back("starting-square");
    }
    st.timings_ms["starting"] = ms_since(t0);

    for (int attempt = 0; attempt <= params.max_restarts; ++attempt) {
        if (attempt > 0) {
            ++st.restarts;
            st.relaxations.push_back("restart");
        }
        Params ap = params;
        ap.rng_seed = attempt_seed(params.rng_seed, attempt);
        std::mt19937_64 rng(ap.rng_seed);

        t0 = Clock::now();
        ScrambleResult sc;
        try {
            sc = sample_scramble(L0, A, P, ap, rng);
        } catch (const ScrambleExhausted& e) {
            if (strict) {
                out.message = e.what();
                st.timings_ms["total"] = ms_since(t_all);
                return out;
            }
            sc = e.best();
            if (attempt == 0) st.relaxations.push_back("scramble");
        }
        st.timings_ms["scramble"] += ms_since(t0);
        st.scramble_tries += sc.tries;
        st.scramble_badness = sc.report.badness;

        t0 = Clock::now();
        const auto G = build_conflict_graph(L0.square, sc.A, sc.P);
        const auto lists = build_lists(G, sc.A, sc.P);
        st.initial_conflicts = static_cast<long long>(G.edges.size());
        std::vector<int> colors;
        long long f = std::max<long long>(1, params.f(n));
        for (;;) {
            try {
                colors = list_edge_color_bounded(G, lists, static_cast<int>(std::min<long long>(f, n)), rng);
                break;
            } catch (const ColoringFailed&) {
                if (strict || f >= n) break;
                f = std::min<long long>(2 * f, n);
            }
        }
        st.timings_ms["coloring"] += ms_since(t0);
        if (colors.size() != G.edges.size()) {
            if (strict) {
                out.message = "list edge colouring failed";
                st.timings_ms["total"] = ms_since(t_all);
                return out;
            }
            continue;
        }
        if (f != std::max<long long>(1, params.f(n))) st.relaxations.push_back("coloring-f=" + std::to_string(f));
        st.coloring_f = f;
        const auto Phat = build_R_and_merge(G, colors, sc.P);

        t0 = Clock::now();
        SolverState S(L0, Phat, sc.A, ap);
        st.prescribed_cells = S.prescribed_count();
        for (int pass = 0; pass < std::max(1, params.max_passes); ++pass) {
            bool progress = false;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    if (!S.prescribed(r, c) || S.fixed(r, c)) continue;
                    if (st.mode == "guaranteed" && st.fix_calls >= fix_budget) continue;
                    ++st.fix_calls;
                    try {
                        const auto res = fix_cell(S, {r, c});
                        S.record_trade(res.trade);
                        ++st.levels[res.level];
                        ++st.routes[res.route];
                        progress = true;
                    } catch (const Error&) {
                        ++st.fix_failures;
                    }
                }
            if (S.fixed_count() == S.prescribed_count() || !progress) break;
        }
        st.timings_ms["trades"] += ms_since(t0);
        st.q = S.q();
        if (S.fixed_count() != S.prescribed_count()) continue;

        const LatinSquare L = unscramble(S.square(), sc.scramble);
        if (!verify_solution(L, P, A).clean()) {
            out.message = "internal error: final square failed verification";
            st.timings_ms["total"] = ms_since(t_all);
            return out;
        }
        out.status = SolveStatus::Solved;
        out.square = L;
        out.log = TradeLog{n, sc.scramble, L0.square.data(), S.log()};
        st.timings_ms["total"] = ms_since(t_all);
        return out;
    }
    out.message = "prescribed cells remain unfixed after all restarts";
    st.timings_ms["total"] = ms_since(t_all);
    return out;
}

}  // namespace rlsc
