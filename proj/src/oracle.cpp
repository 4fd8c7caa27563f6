#include "rlsc/oracle.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace rlsc {

namespace {

using Mask = std::uint64_t;

// Exact cover over three constraint families: every cell filled once, every
// symbol once per row, once per column.
class Search {
public:
    Search(const PartialLatinSquare& P, const AvoidanceArray& A, const SearchLimits& limits)
        : n_(P.order()), limits_(limits), grid_(P.data()), row_used_(n_, 0), col_used_(n_, 0),
          allowed_(static_cast<std::size_t>(n_) * n_, 0) {
        if (A.order() != n_) throw InvalidInput("order mismatch");
        if (n_ < 1 || n_ > kOracleMaxOrder) throw InvalidInput("oracle supports orders 1..63");
        if (!validate_pls(P).clean()) throw InvalidInput("P is not a partial Latin square");
        const Mask full = n_ == 64 ? ~Mask{0} : ((Mask{1} << n_) - 1);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                Mask m = full;
                for (int s : A.symbols(r, c)) m &= ~bit(s);
                allowed_[idx(r, c)] = m;
                const int s = P.at(r, c);
                if (s != 0) {
                    if (!(m & bit(s))) consistent_ = false;
                    row_used_[r] |= bit(s);
                    col_used_[c] |= bit(s);
                }
            }
    }

    // Returns false when the node budget ran out.
    bool run() {
        if (!consistent_) return true;
        return go();
    }

    long long nodes() const { return nodes_; }
    long long solutions() const { return solutions_; }
    const std::vector<int>& first() const { return first_; }
    bool stop_after_first = true;

private:
    static Mask bit(int s) { return Mask{1} << (s - 1); }
    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * n_ + c; }
    Mask cand(int r, int c) const { return allowed_[idx(r, c)] & ~row_used_[r] & ~col_used_[c]; }

    void place(int r, int c, int s) {
        grid_[idx(r, c)] = s;
        row_used_[r] |= bit(s);
        col_used_[c] |= bit(s);
    }
    void lift(int r, int c, int s) {
        grid_[idx(r, c)] = 0;
        row_used_[r] &= ~bit(s);
        col_used_[c] &= ~bit(s);
    }

    bool go() {
        if (++nodes_ > limits_.max_nodes) return false;
        // Pick the constraint with the fewest options.
        int best_kind = -1, best_a = 0, best_b = 0, best_count = n_ + 1;
        bool any_empty = false;
        std::vector<Mask> cands(static_cast<std::size_t>(n_) * n_, 0);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                if (grid_[idx(r, c)] != 0) continue;
                any_empty = true;
                const Mask m = cand(r, c);
                cands[idx(r, c)] = m;
                const int k = std::popcount(m);
                if (k < best_count) {
                    best_count = k;
                    best_kind = 0;
                    best_a = r;
                    best_b = c;
                    if (k == 0) return true;
                }
            }
        if (!any_empty) {
            ++solutions_;
            if (first_.empty()) first_ = grid_;
            if (!stop_after_first && solutions_ > limits_.max_solutions) return false;
            return true;
        }
        if (best_count > 1) {
            for (int s = 1; s <= n_; ++s) {
                const Mask b = bit(s);
                for (int r = 0; r < n_; ++r) {
                    if (row_used_[r] & b) continue;
                    int k = 0;
                    for (int c = 0; c < n_ && k < best_count; ++c)
                        if (grid_[idx(r, c)] == 0 && (cands[idx(r, c)] & b)) ++k;
                    if (k < best_count) {
                        best_count = k;
                        best_kind = 1;
                        best_a = r;
                        best_b = s;
                        if (k == 0) return true;
                    }
                }
                for (int c = 0; c < n_; ++c) {
                    if (col_used_[c] & b) continue;
                    int k = 0;
                    for (int r = 0; r < n_ && k < best_count; ++r)
                        if (grid_[idx(r, c)] == 0 && (cands[idx(r, c)] & b)) ++k;
                    if (k < best_count) {
                        best_count = k;
                        best_kind = 2;
                        best_a = c;
                        best_b = s;
                        if (k == 0) return true;
                    }
                }
            }
        }
        auto branch = [&](int r, int c, int s) -> int {  // 1 stop (found), 0 continue, -1 budget
            place(r, c, s);
            const bool ok = go();
            lift(r, c, s);
            if (!ok) return -1;
            if (stop_after_first && solutions_ > 0) return 1;
            return 0;
        };
        if (best_kind == 0) {
            Mask m = cands[idx(best_a, best_b)];
            while (m) {
                const int s = std::countr_zero(m) + 1;
                m &= m - 1;
                const int res = branch(best_a, best_b, s);
                if (res != 0) return res > 0;
            }
        } else if (best_kind == 1) {
            const Mask b = bit(best_b);
            for (int c = 0; c < n_; ++c)
                if (grid_[idx(best_a, c)] == 0 && (cands[idx(best_a, c)] & b)) {
                    const int res = branch(best_a, c, best_b);
                    if (res != 0) return res > 0;
                }
        } else {
            const Mask b = bit(best_b);
            for (int r = 0; r < n_; ++r)
                if (grid_[idx(r, best_a)] == 0 && (cands[idx(r, best_a)] & b)) {
                    const int res = branch(r, best_a, best_b);
                    if (res != 0) return res > 0;
                }
        }
        return true;
    }

    int n_;
    SearchLimits limits_;
    std::vector<int> grid_;
    std::vector<Mask> row_used_, col_used_, allowed_;
    bool consistent_ = true;
    long long nodes_ = 0;
    long long solutions_ = 0;
    std::vector<int> first_;
};

}  // namespace

ExactResult solve_exact(const PartialLatinSquare& P, const AvoidanceArray& A, const SearchLimits& limits) {
    Search s(P, A, limits);
    const bool finished = s.run();
    ExactResult out;
    out.nodes = s.nodes();
    if (s.solutions() > 0) {
        out.status = ExactStatus::Solved;
        out.square = LatinSquare(P.order(), s.first());
    } else {
        out.status = finished ? ExactStatus::Infeasible : ExactStatus::LimitHit;
    }
    return out;
}

long long count_exact(const PartialLatinSquare& P, const AvoidanceArray& A, const SearchLimits& limits) {
    Search s(P, A, limits);
    s.stop_after_first = false;
    if (!s.run()) throw LimitHit("count_exact exceeded its limits", s.nodes());
    return s.solutions();
}

}  // namespace rlsc
