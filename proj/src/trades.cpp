#include "rlsc/trades.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace rlsc {

// ---------------------------------------------------------------- state

SolverState::SolverState(StartingSquare L0, PartialLatinSquare Phat, AvoidanceArray A, Params params)
    : n_(L0.square.order()), L0_(std::move(L0)), Phat_(std::move(Phat)), A_(std::move(A)), params_(std::move(params)),
      rng_(params_.rng_seed) {
    if (Phat_.order() != n_ || A_.order() != n_) throw InvalidInput("order mismatch");
    if (!validate_pls(Phat_).clean()) throw InvalidInput("P-hat is not a partial Latin square");
    const std::size_t N = static_cast<std::size_t>(n_) * n_;
    grid_ = L0_.square.data();
    col_of_.assign(static_cast<std::size_t>(n_) * (n_ + 1), -1);
    row_of_.assign(static_cast<std::size_t>(n_) * (n_ + 1), -1);
    disturbed_.assign(N, 0);
    tally_row_.assign(n_, 0);
    tally_col_.assign(n_, 0);
    tally_sym_.assign(n_ + 1, 0);
    presc_by_sym_.assign(n_ + 1, 0);
    dist_by_sym_.assign(n_ + 1, 0);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            const int s = at(r, c);
            col_of_[static_cast<std::size_t>(r) * (n_ + 1) + s] = c;
            row_of_[static_cast<std::size_t>(c) * (n_ + 1) + s] = r;
            if (prescribed(r, c)) {
                ++prescribed_total_;
                ++presc_by_sym_[s];
                if (Phat_.at(r, c) == s) ++fixed_total_;
            }
        }
    for (auto [r, c] : L0_.exceptional_cells) {
        if (disturbed_[idx(r, c)]) continue;
        disturbed_[idx(r, c)] = 1;
        ++disturbed_total_;
        ++dist_by_sym_[at(r, c)];
    }
}

long long SolverState::tally(Target t, int index) const {
    switch (t) {
        case Target::Row: return tally_row_.at(index);
        case Target::Column: return tally_col_.at(index);
        case Target::Symbol: return tally_sym_.at(index);
    }
    return 0;
}

void SolverState::write(int r, int c, int s) {
    const int old = grid_[idx(r, c)];
    if (prescribed(r, c)) {
        --presc_by_sym_[old];
        ++presc_by_sym_[s];
        if (Phat_.at(r, c) == old) --fixed_total_;
        if (Phat_.at(r, c) == s) ++fixed_total_;
    }
    if (disturbed_[idx(r, c)]) {
        --dist_by_sym_[old];
        ++dist_by_sym_[s];
    }
    grid_[idx(r, c)] = s;
    col_of_[static_cast<std::size_t>(r) * (n_ + 1) + s] = c;
    row_of_[static_cast<std::size_t>(c) * (n_ + 1) + s] = r;
}

namespace {

// Empty when T is well formed on the grid `at` and keeps every row and column a permutation.
template <class At>
std::string trade_shape_error(int n, const Trade& T, At at) {
    std::set<Cell> seen;
    std::map<int, std::vector<int>> row_old, row_new, col_old, col_new;
    for (const auto& e : T.entries) {
        if (e.cell.row < 0 || e.cell.row >= n || e.cell.col < 0 || e.cell.col >= n) return "cell out of range";
        if (e.new_symbol < 1 || e.new_symbol > n) return "symbol out of range";
        if (!seen.insert(e.cell).second) return "repeated cell";
        if (e.old_symbol == e.new_symbol) return "entry does not change";
        if (at(e.cell.row, e.cell.col) != e.old_symbol) return "old symbol mismatch";
        row_old[e.cell.row].push_back(e.old_symbol);
        row_new[e.cell.row].push_back(e.new_symbol);
        col_old[e.cell.col].push_back(e.old_symbol);
        col_new[e.cell.col].push_back(e.new_symbol);
    }
    auto same = [](std::map<int, std::vector<int>>& a, std::map<int, std::vector<int>>& b) {
        for (auto& [k, v] : a) {
            auto& w = b[k];
            std::sort(v.begin(), v.end());
            std::sort(w.begin(), w.end());
            if (v != w) return false;
        }
        return true;
    };
    if (!same(row_old, row_new) || !same(col_old, col_new)) return "not Latin after trade";
    return {};
}

}  // namespace

void SolverState::check_applicable(const Trade& T) const {
    const auto err = trade_shape_error(n_, T, [this](int r, int c) { return at(r, c); });
    if (err.empty()) return;
    if (err == "old symbol mismatch") throw OldMismatch("trade does not match the current square");
    if (err == "not Latin after trade") throw NotLatinAfterTrade("trade breaks the Latin property");
    throw InvalidInput("malformed trade: " + err);
}

void SolverState::push(const Trade& T) {
    check_applicable(T);
    for (const auto& e : T.entries) write(e.cell.row, e.cell.col, e.new_symbol);
}

void SolverState::pop(const Trade& T) {
    for (const auto& e : T.entries)
        if (at(e.cell.row, e.cell.col) != e.new_symbol) throw OldMismatch("trade is not on top of the square");
    for (const auto& e : T.entries) write(e.cell.row, e.cell.col, e.old_symbol);
}

void SolverState::record_trade(const Trade& T) {
    push(T);
    for (const auto& e : T.entries) {
        const auto [r, c] = e.cell;
        ++tally_row_[r];
        ++tally_col_[c];
        ++tally_sym_[e.old_symbol];
        ++tally_sym_[e.new_symbol];
        if (!disturbed_[idx(r, c)]) {
            disturbed_[idx(r, c)] = 1;
            ++disturbed_total_;
            ++dist_by_sym_[e.new_symbol];
        }
    }
    ++q_;
    log_.push_back(T);
}

std::string SolverState::audit() const {
    const LatinSquare& L0 = L0_.square;
    std::vector<long long> tr(n_, 0), tc(n_, 0), ts(n_ + 1, 0);
    std::vector<char> dist(static_cast<std::size_t>(n_) * n_, 0);
    for (auto [r, c] : L0_.exceptional_cells) dist[idx(r, c)] = 1;
    std::vector<int> replay = L0.data();
    for (const auto& T : log_)
        for (const auto& e : T.entries) {
            ++tr[e.cell.row];
            ++tc[e.cell.col];
            ++ts[e.old_symbol];
            ++ts[e.new_symbol];
            dist[idx(e.cell.row, e.cell.col)] = 1;
            replay[idx(e.cell.row, e.cell.col)] = e.new_symbol;
        }
    if (replay != grid_) return "trade log does not reproduce the square";
    if (!is_latin_grid(n_, grid_)) return "square is not Latin";
    if (tr != tally_row_ || tc != tally_col_ || ts != tally_sym_) return "tallies differ from recount";
    if (static_cast<long long>(log_.size()) != q_) return "q differs from log length";
    std::vector<long long> ps(n_ + 1, 0), ds(n_ + 1, 0);
    long long fixed = 0, dcount = 0;
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            const std::size_t i = idx(r, c);
            if (dist[i] != disturbed_[i]) return "disturbed set differs from recount";
            if (grid_[i] != L0.at(r, c) && !disturbed_[i]) return "changed cell not disturbed";
            if (disturbed_[i]) {
                ++dcount;
                ++ds[grid_[i]];
            }
            if (prescribed(r, c)) {
                ++ps[grid_[i]];
                if (Phat_.at(r, c) == grid_[i]) ++fixed;
            }
            if (A_.contains(r, c, grid_[i]) && !(prescribed(r, c) && Phat_.at(r, c) != grid_[i]))
                return "conflict outside the unfixed prescribed cells";
            if (col_of_[static_cast<std::size_t>(r) * (n_ + 1) + grid_[i]] != c ||
                row_of_[static_cast<std::size_t>(c) * (n_ + 1) + grid_[i]] != r)
                return "position index out of date";
        }
    if (dcount != disturbed_total_ || fixed != fixed_total_) return "counters differ from recount";
    if (ps != presc_by_sym_ || ds != dist_by_sym_) return "per-symbol counters differ from recount";
    return {};
}

// ---------------------------------------------------------------- margins

int max_level(FallbackPolicy p) {
    switch (p) {
        case FallbackPolicy::Strict: return 0;
        case FallbackPolicy::Relaxed: return 2;
        case FallbackPolicy::BestEffort: return 3;
    }
    return 0;
}

double exchange_margin(const Params& p, int n, int a) {
    const double N = n;
    return std::floor(N / 2) - 2 * p.epsilon * N - 6 * p.d * N - 5 * (p.k / p.d) * N - 4 * p.alpha * N -
           8.0 * p.c(n) - 3.0 * a - 3 * p.beta * N;
}

double fix_margin(const Params& p, int n) {
    const double N = n;
    const double inner = 4 * ((p.k + 64.0 / (N * N)) / p.d) * N + 3 + 6.0 * p.c(n) + 2 * p.beta * N +
                         4 * (p.k / p.d) * N + 2 * p.alpha * N + 2.0 * p.f(n) + 4 * p.d * N;
    return N - 2 * inner - 1;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 local_rng(const SolverState& S, std::initializer_list<long long> keys) {
    std::uint64_t h = mix(S.params().rng_seed ^ 0x5151);
    h = mix(h ^ static_cast<std::uint64_t>(S.q()));
    for (long long k : keys) h = mix(h ^ static_cast<std::uint64_t>(k));
    return std::mt19937_64(h);
}

std::vector<int> shuffled(int count, std::mt19937_64& rng) {
    std::vector<int> v(count);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

bool creates_conflict(const SolverState& S, int r, int c, int s) {
    return S.A().contains(r, c, s) && !S.conflict(r, c);
}

// Row-oriented view of the state; transposed views turn column exchanges into row exchanges.
struct View {
    const SolverState& S;
    bool t;
    int n;
    View(const SolverState& s, bool transposed) : S(s), t(transposed), n(s.order()) {}

    Cell real(int x, int y) const { return t ? Cell{y, x} : Cell{x, y}; }
    int at(int x, int y) const { return t ? S.at(y, x) : S.at(x, y); }
    int pos_line(int x, int s) const { return t ? S.row_of(x, s) : S.col_of(x, s); }
    int pos_cross(int y, int s) const { return t ? S.col_of(y, s) : S.row_of(y, s); }
    bool presc(int x, int y) const { return t ? S.prescribed(y, x) : S.prescribed(x, y); }
    bool dist(int x, int y) const { return t ? S.disturbed(y, x) : S.disturbed(x, y); }
    bool line_over(int x) const { return S.overloaded(t ? Target::Column : Target::Row, x); }
    bool cross_over(int y) const { return S.overloaded(t ? Target::Row : Target::Column, y); }
    bool sym_over(int s) const { return S.overloaded(Target::Symbol, s); }
};

// Overlay of tentative swaps on a view.
class Sim {
public:
    explicit Sim(const View& v) : V(v) {}

    int get(int x, int y) const {
        for (const auto& [cx, cy, s] : ch_)
            if (cx == x && cy == y) return s;
        return V.at(x, y);
    }
    void put(int x, int y, int s) {
        for (auto& [cx, cy, v] : ch_)
            if (cx == x && cy == y) {
                v = s;
                return;
            }
        ch_.push_back({x, y, s});
    }
    bool swap(int x1, int x2, int y1, int y2) {
        if (x1 == x2 || y1 == y2) return false;
        const int a = get(x1, y1), b = get(x1, y2);
        if (a == b || get(x2, y1) != b || get(x2, y2) != a) return false;
        put(x1, y1, b);
        put(x1, y2, a);
        put(x2, y1, a);
        put(x2, y2, b);
        return true;
    }
    Trade trade() const {
        Trade T;
        for (const auto& [x, y, s] : ch_) {
            const int old = V.at(x, y);
            if (old != s) T.entries.push_back({V.real(x, y), old, s});
        }
        std::sort(T.entries.begin(), T.entries.end(),
                  [](const TradeEntry& a, const TradeEntry& b) { return a.cell < b.cell; });
        return T;
    }

private:
    const View& V;
    std::vector<std::tuple<int, int, int>> ch_;
};

bool is_avoided(const ExchangeRequest& req, int s) {
    return std::find(req.avoid_symbols.begin(), req.avoid_symbols.end(), s) != req.avoid_symbols.end();
}

PostconditionCheck check_exchange_cells(const SolverState& S, const Trade& T, Cell a, Cell b,
                                        const ExchangeRequest& req) {
    PostconditionCheck out;
    const auto shape = trade_shape_error(S.order(), T, [&S](int r, int c) { return S.at(r, c); });
    if (!shape.empty()) {
        out.hard.push_back(shape);
        return out;
    }
    if (T.size() > 16) out.hard.push_back("more than 16 cells");
    const int sa = S.at(a.row, a.col), sb = S.at(b.row, b.col);
    bool got_a = false, got_b = false;
    std::set<int> over;
    for (const auto& e : T.entries) {
        const auto [r, c] = e.cell;
        if (S.prescribed(r, c)) out.hard.push_back("prescribed cell in trade");
        if (is_avoided(req, e.old_symbol)) out.hard.push_back("avoided symbol in trade");
        if (std::find(req.protected_cells.begin(), req.protected_cells.end(), e.cell) != req.protected_cells.end())
            out.hard.push_back("protected cell in trade");
        if (creates_conflict(S, r, c, e.new_symbol)) out.hard.push_back("new conflict");
        if (e.cell == a) got_a = e.new_symbol == sb;
        if (e.cell == b) got_b = e.new_symbol == sa;
        for (int s : {e.old_symbol, e.new_symbol})
            if (S.overloaded(Target::Symbol, s)) over.insert(s);
    }
    if (!got_a || !got_b) out.hard.push_back("cells not exchanged");
    for (int s : over) out.soft.push_back("overloaded symbol " + std::to_string(s));
    return out;
}

// Search for an exchange of (x1,y1) and (x1,y2) in view coordinates at one level.
std::optional<TradeResult> exchange_try(const SolverState& S, bool transposed, int x1, int y1, int y2,
                                        const ExchangeRequest& req, int level) {
    const View V(S, transposed);
    const int n = V.n;
    if (y1 == y2) return std::nullopt;
    const Cell first = V.real(x1, y1), second = V.real(x1, y2);
    const int s1 = V.at(x1, y1), s2 = V.at(x1, y2);
    if (V.presc(x1, y1) || V.presc(x1, y2) || is_avoided(req, s1) || is_avoided(req, s2)) return std::nullopt;
    if (creates_conflict(S, first.row, first.col, s2) || creates_conflict(S, second.row, second.col, s1))
        return std::nullopt;
    const bool strict = level == 0;
    const bool geometric = level < 2;
    if (strict && (V.cross_over(y1) || V.cross_over(y2) || V.sym_over(s1) || V.sym_over(s2))) return std::nullopt;
    const int x3 = V.pos_cross(y1, s2), x4 = V.pos_cross(y2, s1);
    if (V.presc(x3, y1) || V.presc(x4, y2)) return std::nullopt;
    if (geometric && (V.dist(x3, y1) || V.dist(x4, y2))) return std::nullopt;
    if (strict && (V.line_over(x3) || V.line_over(x4))) return std::nullopt;

    auto finish = [&](const Sim& sim, const char* route) -> std::optional<TradeResult> {
        Trade T = sim.trade();
        if (check_exchange_cells(S, T, first, second, req).ok(level)) return TradeResult{std::move(T), level, route};
        return std::nullopt;
    };
    auto ok_sym = [&](int s) { return !is_avoided(req, s) && !(strict && V.sym_over(s)); };
    auto clean = [&](std::initializer_list<std::pair<int, int>> cells) {
        for (auto [x, y] : cells) {
            if (V.presc(x, y)) return false;
            if (geometric && V.dist(x, y)) return false;
        }
        return true;
    };
    auto strong = [&](int a, int b) { return !geometric || is_strong_pair(n, a, b); };

    if (x3 == x4) {
        Sim sim(V);
        if (sim.swap(x1, x3, y1, y2))
            if (auto r = finish(sim, "intercalate")) return r;
    }
    auto rng = local_rng(S, {x1, y1, y2, level});
    const auto rows = shuffled(n, rng);
    const auto syms = shuffled(n, rng);
    const bool same_half = upper_half(n, x3) == upper_half(n, x4);

    // Case 1: two intercalates through a common line x2, then the closing swap.
    if (x3 != x4 && (!geometric || same_half)) {
        for (int x2 : rows) {
            if (x2 == x1 || x2 == x3 || x2 == x4) continue;
            const int s3 = V.at(x2, y1), s4 = V.at(x2, y2);
            if (!ok_sym(s3) || !ok_sym(s4)) continue;
            const int y4 = V.pos_line(x2, s2), y3 = V.pos_line(x2, s1);
            if (V.at(x3, y4) != s3 || V.at(x4, y3) != s4) continue;
            if (!strong(s2, s3) || !strong(s1, s4)) continue;
            if (!clean({{x2, y1}, {x2, y4}, {x3, y4}, {x2, y2}, {x2, y3}, {x4, y3}})) continue;
            if (strict && (V.line_over(x2) || V.cross_over(y3) || V.cross_over(y4))) continue;
            Sim sim(V);
            if (!sim.swap(x3, x2, y1, y4) || !sim.swap(x4, x2, y2, y3) || !sim.swap(x1, x2, y1, y2)) continue;
            if (auto r = finish(sim, "case1")) return r;
        }
    }

    // Case 2: C3 on the x4 side, C4 and C5 sharing a symbol s6, then two closing swaps.
    // Orientation o = 1 exchanges the roles of (y1,s1,x3) and (y2,s2,x4).
    for (int o = 0; o < 2; ++o) {
        if (x3 == x4) break;
        const int ya = o ? y2 : y1, yb = o ? y1 : y2;
        const int sa = o ? s2 : s1, sb = o ? s1 : s2;
        const int xa = o ? x4 : x3, xb = o ? x3 : x4;
        if (geometric && (same_half || upper_half(n, xa))) continue;
        for (int x2 : rows) {
            if (x2 == x1 || x2 == xa || x2 == xb) continue;
            const int s3 = V.at(x2, ya), s4 = V.at(x2, yb);
            if (!ok_sym(s3) || !ok_sym(s4)) continue;
            const int y3 = V.pos_line(x2, sa);
            if (V.at(xb, y3) != s4 || !strong(sa, s4)) continue;
            const int y4 = V.pos_line(x2, sb);
            const int s5 = V.at(xa, y4);
            if (!ok_sym(s5)) continue;
            if (!clean({{x2, yb}, {x2, y3}, {xb, y3}, {x2, ya}, {x2, y4}, {xa, y4}})) continue;
            if (strict && V.line_over(x2)) continue;
            for (int si : syms) {
                const int s6 = si + 1;
                if (s6 == sa || s6 == sb || s6 == s3 || s6 == s4 || s6 == s5 || !ok_sym(s6)) continue;
                const int x6 = V.pos_cross(ya, s6), y6 = V.pos_line(x2, s6);
                if (V.at(x6, y6) != s3 || !strong(s3, s6)) continue;
                const int x5 = V.pos_cross(y4, s6), y5 = V.pos_line(xa, s6);
                if (V.at(x5, y5) != s5 || !strong(s5, s6)) continue;
                if (!clean({{x6, ya}, {x6, y6}, {x2, y6}, {x5, y4}, {x5, y5}, {xa, y5}})) continue;
                if (strict && (V.line_over(x5) || V.line_over(x6))) continue;
                Sim sim(V);
                if (!sim.swap(xb, x2, yb, y3) || !sim.swap(x2, x6, ya, y6) || !sim.swap(xa, x5, y4, y5) ||
                    !sim.swap(x2, xa, ya, y4) || !sim.swap(x1, x2, ya, yb))
                    continue;
                if (auto r = finish(sim, "case2")) return r;
            }
        }
    }

    if (level >= 3) {
        // Switch the two lines' cycle through x1 across columns y1, y2.
        std::vector<int> cyc{x1};
        for (int x = V.pos_cross(y1, V.at(x1, y2)); x != x1 && cyc.size() <= 8; x = V.pos_cross(y1, V.at(x, y2)))
            cyc.push_back(x);
        if (cyc.size() <= 8) {
            Sim sim(V);
            for (int x : cyc) {
                sim.put(x, y1, V.at(x, y2));
                sim.put(x, y2, V.at(x, y1));
            }
            if (auto r = finish(sim, "cycle-lines")) return r;
        }
        // Switch the (s1,s2) symbol cycle through (x1,y1).
        std::vector<std::pair<int, int>> cells;
        int x = x1, y = y1;
        do {
            cells.push_back({x, y});              // holds s1
            const int yy = V.pos_line(x, s2);     // same line, s2
            cells.push_back({x, yy});
            x = V.pos_cross(yy, s1);              // same cross line, s1
            y = yy;
        } while (x != x1 && cells.size() <= 16);
        if (cells.size() <= 16) {
            Sim sim(V);
            for (auto [cx, cy] : cells) sim.put(cx, cy, V.at(cx, cy) == s1 ? s2 : s1);
            if (auto r = finish(sim, "cycle-symbols")) return r;
        }
    }
    return std::nullopt;
}

TradeResult exchange(const SolverState& S, bool transposed, int x1, int y1, int y2, const ExchangeRequest& req) {
    const int n = S.order();
    if (x1 < 0 || x1 >= n || y1 < 0 || y1 >= n || y2 < 0 || y2 >= n || y1 == y2)
        throw InvalidInput("exchange needs two distinct cells of one line");
    const auto& p = S.params();
    const int a = static_cast<int>(req.avoid_symbols.size());
    if (p.fallback_policy == FallbackPolicy::Strict && !(exchange_margin(p, n, a) > 6))
        throw FeasibilityUnmet("exchange premise fails for these parameters");
    for (int level = 0; level <= max_level(p.fallback_policy); ++level)
        if (auto r = exchange_try(S, transposed, x1, y1, y2, req, level)) return *r;
    throw NoValidColumns("no exchange found for these cells");
}

}  // namespace

TradeResult row_exchange(const SolverState& S, int r1, int c1, int c2, const ExchangeRequest& req) {
    return exchange(S, false, r1, c1, c2, req);
}

TradeResult column_exchange(const SolverState& S, int c1, int r1, int r2, const ExchangeRequest& req) {
    return exchange(S, true, c1, r1, r2, req);
}

PostconditionCheck check_row_exchange(const SolverState& S, const Trade& T, int r1, int c1, int c2,
                                      const ExchangeRequest& req) {
    return check_exchange_cells(S, T, {r1, c1}, {r1, c2}, req);
}

PostconditionCheck check_column_exchange(const SolverState& S, const Trade& T, int c1, int r1, int r2,
                                         const ExchangeRequest& req) {
    return check_exchange_cells(S, T, {r1, c1}, {r2, c1}, req);
}

// ---------------------------------------------------------------- fix_cell

PostconditionCheck check_fix_cell(const SolverState& S, const Trade& T, Cell cell) {
    PostconditionCheck out;
    const auto shape = trade_shape_error(S.order(), T, [&S](int r, int c) { return S.at(r, c); });
    if (!shape.empty()) {
        out.hard.push_back(shape);
        return out;
    }
    const int s1 = S.at(cell.row, cell.col), s2 = S.Phat().at(cell.row, cell.col);
    if (T.size() > 69) out.hard.push_back("more than 69 cells");
    bool target = false;
    int other_prescribed = 0, with_s1 = 0, with_s2 = 0;
    std::set<int> over;
    for (const auto& e : T.entries) {
        const auto [r, c] = e.cell;
        if (e.cell == cell) {
            target = e.new_symbol == s2;
        } else if (S.prescribed(r, c)) {
            ++other_prescribed;
            if (S.fixed(r, c)) out.hard.push_back("changes a fixed prescribed cell");
            if (S.overloaded(Target::Symbol, e.new_symbol)) over.insert(e.new_symbol);
        }
        if (e.old_symbol == s1) ++with_s1;
        if (e.old_symbol == s2) ++with_s2;
        if (e.old_symbol != s1 && e.old_symbol != s2 && S.overloaded(Target::Symbol, e.old_symbol))
            over.insert(e.old_symbol);
        if (creates_conflict(S, r, c, e.new_symbol)) out.hard.push_back("new conflict");
    }
    if (!target) out.hard.push_back("target cell does not receive its prescribed symbol");
    if (other_prescribed > 2) out.hard.push_back("more than two other prescribed cells changed");
    if (with_s1 != 2) out.hard.push_back("trade does not hold exactly two cells with the old symbol");
    if (with_s2 > 4) out.hard.push_back("trade holds more than four cells with the new symbol");
    for (int s : over) out.soft.push_back("overloaded symbol " + std::to_string(s));
    return out;
}

namespace {

Trade swap_on(const SolverState& S, int r1, int r2, int c1, int c2) {
    const int a = S.at(r1, c1), b = S.at(r1, c2);
    if (a == b || S.at(r2, c1) != b || S.at(r2, c2) != a) return {};
    Trade T;
    T.entries = {{{r1, c1}, a, b}, {{r1, c2}, b, a}, {{r2, c1}, b, a}, {{r2, c2}, a, b}};
    std::sort(T.entries.begin(), T.entries.end(),
              [](const TradeEntry& x, const TradeEntry& y) { return x.cell < y.cell; });
    return T;
}

// Net effect of a stack of pushed trades; pops them all.
Trade collapse(SolverState& S, std::vector<Trade>& stack) {
    std::map<Cell, int> original;
    for (const auto& T : stack)
        for (const auto& e : T.entries) original.emplace(e.cell, e.old_symbol);
    std::map<Cell, int> final_;
    for (const auto& [cell, s] : original) final_[cell] = S.at(cell.row, cell.col);
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) S.pop(*it);
    stack.clear();
    Trade out;
    for (const auto& [cell, s] : original)
        if (final_[cell] != s) out.entries.push_back({cell, s, final_[cell]});
    return out;
}

void unwind(SolverState& S, std::vector<Trade>& stack) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) S.pop(*it);
    stack.clear();
}

}  // namespace

TradeResult fix_cell(SolverState& S, Cell cell, const FixOptions& opt) {
    const int n = S.order();
    const auto [r1, c1] = cell;
    if (r1 < 0 || r1 >= n || c1 < 0 || c1 >= n) throw InvalidInput("cell out of range");
    if (!S.prescribed(r1, c1) || S.fixed(r1, c1)) throw InvalidInput("cell is not an unfixed prescribed cell");
    const auto& p = S.params();
    const int s1 = S.at(r1, c1), s2 = S.Phat().at(r1, c1);
    if (p.fallback_policy == FallbackPolicy::Strict) {
        if (!(fix_margin(p, n) > 0)) throw FeasibilityUnmet("fix-cell premise fails for these parameters");
        const double presc_cap = 2.0 * p.c(n) + 2 * p.d * n;
        const double dist_cap = 4 * (p.c(n) + p.d * n + p.alpha * n + p.f(n));
        for (int s = 1; s <= n; ++s)
            if (S.prescribed_with_symbol(s) > presc_cap || S.disturbed_with_symbol(s) > dist_cap)
                throw FeasibilityUnmet("per-symbol prescription or disturbance premise fails");
    }
    const int r3 = S.row_of(c1, s2), c3 = S.col_of(r1, s2);
    const ExchangeRequest base{{s1, s2}, {}};
    bool any_donor = false;

    for (int level = 0; level <= max_level(p.fallback_policy); ++level) {
        const bool strict = level == 0;
        if (opt.shortcuts) {
            const Trade T = swap_on(S, r1, r3, c1, c3);
            if (!T.empty() && check_fix_cell(S, T, cell).ok(level)) return {T, level, "intercalate"};
            if (level >= 3) {
                // Row cycle, column cycle and symbol cycle through the target all set it to s2.
                for (bool transposed : {false, true}) {
                    const int x = transposed ? c1 : r1, y1 = transposed ? r1 : c1, y2 = transposed ? r3 : c3;
                    const View V(S, transposed);
                    std::vector<int> cyc{x};
                    for (int u = V.pos_cross(y1, V.at(x, y2)); u != x && cyc.size() <= 34;
                         u = V.pos_cross(y1, V.at(u, y2)))
                        cyc.push_back(u);
                    if (cyc.size() > 34) continue;
                    Sim sim(V);
                    for (int u : cyc) {
                        sim.put(u, y1, V.at(u, y2));
                        sim.put(u, y2, V.at(u, y1));
                    }
                    Trade T2 = sim.trade();
                    if (check_fix_cell(S, T2, cell).ok(level)) return {T2, level, "cycle-lines"};
                }
            }
        }

        auto rng = local_rng(S, {r1, c1, level, 0xf1});
        const auto donors = shuffled(n, rng);
        int tried = 0;
        for (int r4 : donors) {
            if (opt.max_donors > 0 && tried >= opt.max_donors) break;
            const int c4 = S.col_of(r4, s1);
            const int c2 = S.col_of(r4, s2);
            const int r2 = S.row_of(c4, s2);
            const std::set<int> rs{r1, r2, r3, r4}, cs{c1, c2, c3, c4};
            if (rs.size() != 4 || cs.size() != 4) continue;
            if (S.prescribed(r4, c4) || S.prescribed(r4, c2) || S.prescribed(r2, c4)) continue;
            if (S.prescribed(r4, c1) || S.prescribed(r2, c3) || S.prescribed(r3, c2) || S.prescribed(r1, c4)) continue;
            if (creates_conflict(S, r4, c4, s2) || creates_conflict(S, r3, c2, s2) || creates_conflict(S, r2, c3, s2) ||
                creates_conflict(S, r4, c1, s1) || creates_conflict(S, r1, c4, s1))
                continue;
            if (level < 2 && S.disturbed(r4, c4)) continue;
            if (strict) {
                bool bad = false;
                for (auto [r, c] : {Cell{r4, c1}, Cell{r2, c3}, Cell{r3, c2}, Cell{r1, c4}})
                    bad = bad || S.overloaded(Target::Symbol, S.at(r, c));
                if (bad) continue;
            }
            any_donor = true;
            ++tried;

            // Pick an auxiliary symbol and bring it into two cells by a row and a column exchange.
            auto place_pair = [&](Cell row_cell, Cell col_cell, Cell keep1, Cell keep2, std::vector<Trade>& stack,
                                  std::vector<Cell> protect) -> bool {
                std::vector<int> cand{S.at(row_cell.row, row_cell.col), S.at(col_cell.row, col_cell.col)};
                for (int i : shuffled(n, rng)) cand.push_back(i + 1);
                std::set<int> seen;
                int attempts = 0;
                for (int x : cand) {
                    if (x == s1 || x == s2 || !seen.insert(x).second) continue;
                    if (attempts++ >= opt.max_aux) break;
                    if (creates_conflict(S, keep1.row, keep1.col, x) || creates_conflict(S, keep2.row, keep2.col, x))
                        continue;
                    if (strict && S.overloaded(Target::Symbol, x)) continue;
                    const std::size_t depth = stack.size();
                    bool ok = true;
                    ExchangeRequest req = base;
                    req.protected_cells = protect;
                    try {
                        if (S.at(row_cell.row, row_cell.col) != x) {
                            const int cx = S.col_of(row_cell.row, x);
                            auto r = exchange_try(S, false, row_cell.row, row_cell.col, cx, req, level);
                            if (!r) throw NoValidColumns("");
                            S.push(r->trade);
                            stack.push_back(r->trade);
                        }
                        req.protected_cells.push_back(row_cell);
                        if (S.at(col_cell.row, col_cell.col) != x) {
                            const int rx = S.row_of(col_cell.col, x);
                            auto r = exchange_try(S, true, col_cell.col, col_cell.row, rx, req, level);
                            if (!r) throw NoValidColumns("");
                            S.push(r->trade);
                            stack.push_back(r->trade);
                        }
                    } catch (const NoValidColumns&) {
                        ok = false;
                    }
                    if (ok && S.at(row_cell.row, row_cell.col) == x && S.at(col_cell.row, col_cell.col) == x)
                        return true;
                    while (stack.size() > depth) {
                        S.pop(stack.back());
                        stack.pop_back();
                    }
                }
                return false;
            };

            std::vector<Trade> stack;
            // s3 into (r1,c4) and (r2,c3); s4 into (r3,c2) and (r4,c1).
            if (!place_pair({r1, c4}, {r2, c3}, {r1, c3}, {r2, c4}, stack, {})) continue;
            if (!place_pair({r3, c2}, {r4, c1}, {r4, c2}, {r3, c1}, stack, {{r1, c4}, {r2, c3}})) {
                unwind(S, stack);
                continue;
            }
            bool ok = true;
            for (auto [a, b, x, y] : {std::array<int, 4>{r3, r4, c1, c2}, std::array<int, 4>{r1, r2, c3, c4},
                                      std::array<int, 4>{r1, r4, c1, c4}}) {
                Trade T = swap_on(S, a, b, x, y);
                if (T.empty()) {
                    ok = false;
                    break;
                }
                S.push(T);
                stack.push_back(std::move(T));
            }
            if (!ok) {
                unwind(S, stack);
                continue;
            }
            Trade net = collapse(S, stack);
            if (check_fix_cell(S, net, cell).ok(level)) return {std::move(net), level, "composite"};
        }
    }
    if (!any_donor) throw NoValidDonorCell("no donor cell passes the filters");
    throw NoAuxSymbol("no auxiliary symbols complete the construction");
}

}  // namespace rlsc
