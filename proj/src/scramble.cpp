#include "rlsc/scramble.hpp"

#include <algorithm>
#include <numeric>

namespace rlsc {

namespace {

void require_perm(const std::vector<int>& p, int n, const char* what) {
    if (static_cast<int>(p.size()) != n) throw InvalidInput(std::string(what) + " has the wrong length");
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v]) throw InvalidInput(std::string(what) + " is not a permutation");
        seen[v] = 1;
    }
}

void require_scramble(const Scramble& s, int n) {
    require_perm(s.sigma, n, "sigma");
    require_perm(s.tau, n, "tau");
}

}  // namespace

Scramble Scramble::identity(int n) {
    Scramble s;
    s.sigma.resize(n);
    s.tau.resize(n);
    std::iota(s.sigma.begin(), s.sigma.end(), 0);
    std::iota(s.tau.begin(), s.tau.end(), 0);
    return s;
}

std::vector<int> allowed_strong_census(const LatinSquare& L, const AvoidanceArray& A) {
    const int n = L.order();
    std::vector<int> count(static_cast<std::size_t>(n) * n, 0);
    std::vector<int> col_of(static_cast<std::size_t>(n) * (n + 1));  // col_of[r*(n+1)+s]
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) col_of[static_cast<std::size_t>(r) * (n + 1) + L.at(r, c)] = c;
    auto bump = [&](int r, int c) { ++count[static_cast<std::size_t>(r) * n + c]; };
    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = r1 + 1; r2 < n; ++r2)
            for (int c1 = 0; c1 < n; ++c1) {
                const int s = L.at(r1, c1), t = L.at(r2, c1);
                if (!is_strong_pair(n, s, t)) continue;
                const int c2 = col_of[static_cast<std::size_t>(r1) * (n + 1) + t];
                if (c2 <= c1 || L.at(r2, c2) != s) continue;
                // After the swap (r1,c1),(r2,c2) hold t and (r1,c2),(r2,c1) hold s.
                if (A.contains(r1, c1, t) || A.contains(r2, c2, t) || A.contains(r1, c2, s) || A.contains(r2, c1, s))
                    continue;
                bump(r1, c1);
                bump(r1, c2);
                bump(r2, c1);
                bump(r2, c2);
            }
    return count;
}

WellBehavedReport check_well_behaved(const StartingSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P,
                                     const Params& params) {
    const LatinSquare& L = L0.square;
    const int n = L.order();
    if (A.order() != n || P.order() != n) throw InvalidInput("order mismatch");
    const long long c = params.c(n);
    WellBehavedReport rep;
    long long excess = 0;
    auto over = [&](long long v) { return v > c ? v - c : 0; };

    // (a)
    const auto census = allowed_strong_census(L, A);
    std::vector<char> ex(static_cast<std::size_t>(n) * n, 0);
    for (auto [r, cc] : L0.exceptional_cells) ex[static_cast<std::size_t>(r) * n + cc] = 1;
    const double threshold = n / 2 - params.epsilon * n;
    for (std::size_t i = 0; i < census.size(); ++i)
        if (!ex[i] && census[i] < threshold - 1e-9) ++rep.condition_a_violations;
    excess += rep.condition_a_violations;

    // (b)-(f)
    std::vector<int> row_conf(n, 0), col_conf(n, 0), sym_conf(n + 1, 0), sym_presc(n + 1, 0);
    std::vector<int> pair(static_cast<std::size_t>(n + 1) * (n + 1), 0);  // pair[s1*(n+1)+s2]
    for (int r = 0; r < n; ++r)
        for (int cc = 0; cc < n; ++cc) {
            const int s = L.at(r, cc);
            if (A.contains(r, cc, s)) {
                ++row_conf[r];
                ++col_conf[cc];
                ++sym_conf[s];
            }
            if (!P.is_empty(r, cc)) ++sym_presc[s];
            for (int t : A.symbols(r, cc)) ++pair[static_cast<std::size_t>(s) * (n + 1) + t];
        }
    for (int v : row_conf) {
        rep.max_row_conflicts = std::max(rep.max_row_conflicts, v);
        excess += over(v);
    }
    for (int v : col_conf) {
        rep.max_col_conflicts = std::max(rep.max_col_conflicts, v);
        excess += over(v);
    }
    for (int s = 1; s <= n; ++s) {
        rep.max_symbol_conflicts = std::max(rep.max_symbol_conflicts, sym_conf[s]);
        rep.max_symbol_prescriptions = std::max(rep.max_symbol_prescriptions, sym_presc[s]);
        excess += over(sym_conf[s]) + over(sym_presc[s]);
    }
    for (int v : pair) {
        rep.max_symbol_pair = std::max(rep.max_symbol_pair, v);
        excess += over(v);
    }
    rep.badness = excess;
    rep.pass = excess == 0;
    return rep;
}

Scramble random_scramble(int n, std::mt19937_64& rng) {
    Scramble s = Scramble::identity(n);
    std::shuffle(s.sigma.begin(), s.sigma.end(), rng);
    std::shuffle(s.tau.begin(), s.tau.end(), rng);
    return s;
}

PartialLatinSquare scramble_pls(const PartialLatinSquare& P, const Scramble& s) {
    const int n = P.order();
    require_scramble(s, n);
    PartialLatinSquare out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.set(i, j, P.at(s.sigma[i], s.tau[j]));
    return out;
}

AvoidanceArray scramble_array(const AvoidanceArray& A, const Scramble& s) {
    const int n = A.order();
    require_scramble(s, n);
    AvoidanceArray out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int t : A.symbols(s.sigma[i], s.tau[j])) out.insert(i, j, t);
    return out;
}

LatinSquare scramble_square(const LatinSquare& L, const Scramble& s) {
    const int n = L.order();
    require_scramble(s, n);
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cells[static_cast<std::size_t>(i) * n + j] = L.at(s.sigma[i], s.tau[j]);
    return LatinSquare(n, std::move(cells));
}

LatinSquare unscramble(const LatinSquare& L, const Scramble& s) {
    const int n = L.order();
    require_scramble(s, n);
    std::vector<int> cells(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cells[static_cast<std::size_t>(s.sigma[i]) * n + s.tau[j]] = L.at(i, j);
    return LatinSquare(n, std::move(cells));
}

ScrambleResult sample_scramble(const StartingSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P,
                               const Params& params, std::mt19937_64& rng) {
    const int n = L0.square.order();
    if (A.order() != n || P.order() != n) throw InvalidInput("order mismatch");
    const int tries = std::max(1, params.max_scramble_tries);
    ScrambleResult best;
    bool have_best = false;
    for (int t = 1; t <= tries; ++t) {
        ScrambleResult cur;
        cur.scramble = random_scramble(n, rng);
        cur.A = scramble_array(A, cur.scramble);
        cur.P = scramble_pls(P, cur.scramble);
        cur.report = check_well_behaved(L0, cur.A, cur.P, params);
        cur.tries = t;
        if (cur.report.pass) return cur;
        if (!have_best || cur.report.badness < best.report.badness) {
            best = std::move(cur);
            have_best = true;
        }
    }
    best.tries = tries;
    throw ScrambleExhausted("no well-behaved scramble within max_scramble_tries", std::move(best));
}

}  // namespace rlsc
