#include "rlsc/coloring.hpp"

#include <algorithm>
#include <numeric>

namespace rlsc {

int ConflictGraph::max_degree() const {
    std::vector<int> row(n, 0), col(n, 0);
    int best = 0;
    for (auto [r, c] : edges) best = std::max({best, ++row[r], ++col[c]});
    return best;
}

std::size_t ListAssignment::min_size() const {
    std::size_t best = lists.empty() ? 0 : lists[0].size();
    for (const auto& l : lists) best = std::min(best, l.size());
    return best;
}

ConflictGraph build_conflict_graph(const LatinSquare& L0, const AvoidanceArray& A, const PartialLatinSquare& P) {
    const int n = L0.order();
    if (A.order() != n || P.order() != n) throw InvalidInput("order mismatch");
    ConflictGraph G;
    G.n = n;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (A.contains(r, c, L0.at(r, c)) && P.is_empty(r, c)) G.edges.push_back({r, c});
    return G;
}

ListAssignment build_lists(const ConflictGraph& G, const AvoidanceArray& A, const PartialLatinSquare& P) {
    const int n = G.n;
    ListAssignment out;
    out.lists.reserve(G.edges.size());
    for (auto [r, c] : G.edges) {
        std::vector<char> banned(n + 1, 0);
        for (int j = 0; j < n; ++j) banned[P.at(r, j)] = 1;
        for (int i = 0; i < n; ++i) banned[P.at(i, c)] = 1;
        std::vector<int> l;
        for (int s = 1; s <= n; ++s)
            if (!banned[s] && !A.contains(r, c, s)) l.push_back(s);
        out.lists.push_back(std::move(l));
    }
    return out;
}

namespace {

struct ColoringRun {
    const ConflictGraph& G;
    const ListAssignment& lists;
    int f;
    int n;
    std::vector<int> color;
    std::vector<int> count;
    std::vector<int> row_edge, col_edge;  // [v*(n+1)+c] = edge index or -1

    ColoringRun(const ConflictGraph& g, const ListAssignment& l, int f_)
        : G(g), lists(l), f(f_), n(g.n), color(g.edges.size(), 0), count(g.n + 1, 0),
          row_edge(static_cast<std::size_t>(g.n) * (g.n + 1), -1), col_edge(static_cast<std::size_t>(g.n) * (g.n + 1), -1) {}

    int& at_row(int e, int c) { return row_edge[static_cast<std::size_t>(G.edges[e].row) * (n + 1) + c]; }
    int& at_col(int e, int c) { return col_edge[static_cast<std::size_t>(G.edges[e].col) * (n + 1) + c]; }
    bool free_at(int e, int c) { return at_row(e, c) < 0 && at_col(e, c) < 0; }

    void assign(int e, int c) {
        color[e] = c;
        at_row(e, c) = e;
        at_col(e, c) = e;
        ++count[c];
    }
    void unassign(int e) {
        const int c = color[e];
        at_row(e, c) = -1;
        at_col(e, c) = -1;
        --count[c];
        color[e] = 0;
    }

    // Least-used free colour in the list, preferring colours below f.
    int pick(int e, int skip = 0) {
        int best = 0;
        for (int c : lists.lists[e]) {
            if (c == skip || !free_at(e, c)) continue;
            if (best == 0 || count[c] < count[best]) best = c;
        }
        return best;
    }

    // Free a colour for e by moving one blocking edge elsewhere.
    bool repair(int e) {
        for (int c : lists.lists[e]) {
            const int a = at_row(e, c), b = at_col(e, c);
            if (a >= 0 && b >= 0) continue;
            const int blocker = a >= 0 ? a : b;
            const int old = color[blocker];
            unassign(blocker);
            const int alt = pick(blocker, old);
            if (alt != 0 && count[alt] < f) {
                assign(blocker, alt);
                assign(e, c);
                return true;
            }
            assign(blocker, old);
        }
        return false;
    }

    bool run(const std::vector<int>& order) {
        for (int e : order) {
            const int c = pick(e);
            if (c != 0) {
                assign(e, c);
            } else if (!repair(e)) {
                return false;
            }
        }
        // Recolour dense classes into colours used at most f-1 times, so the
        // total excess strictly decreases.
        bool moved = true;
        while (moved) {
            moved = false;
            bool dense = false;
            for (std::size_t e = 0; e < color.size(); ++e) {
                const int c = color[e];
                if (count[c] <= f) continue;
                dense = true;
                for (int t : lists.lists[e]) {
                    if (t == c || count[t] >= f || !free_at(static_cast<int>(e), t)) continue;
                    unassign(static_cast<int>(e));
                    assign(static_cast<int>(e), t);
                    moved = true;
                    break;
                }
            }
            if (!dense) return true;
        }
        return false;
    }
};

}  // namespace

std::vector<int> list_edge_color_bounded(const ConflictGraph& G, const ListAssignment& lists, int f,
                                         std::mt19937_64& rng) {
    if (lists.lists.size() != G.edges.size()) throw InvalidInput("list count differs from edge count");
    if (f < 1) throw InvalidInput("f must be at least 1");
    const int m = static_cast<int>(G.edges.size());
    for (int e = 0; e < m; ++e)
        for (int c : lists.lists[e])
            if (c < 1 || c > G.n) throw InvalidInput("list colour out of range");
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    constexpr int kRestarts = 40;
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        std::shuffle(order.begin(), order.end(), rng);
        ColoringRun run(G, lists, f);
        if (run.run(order)) return run.color;
    }
    throw ColoringFailed("list edge colouring with multiplicity bound failed");
}

std::string check_edge_coloring(const ConflictGraph& G, const ListAssignment& lists, const std::vector<int>& colors,
                                int f) {
    const int n = G.n;
    if (colors.size() != G.edges.size()) return "size mismatch";
    std::vector<int> count(n + 1, 0);
    std::vector<char> row(static_cast<std::size_t>(n) * (n + 1), 0), col(static_cast<std::size_t>(n) * (n + 1), 0);
    for (std::size_t e = 0; e < colors.size(); ++e) {
        const int c = colors[e];
        if (c < 1 || c > n) return "colour out of range";
        if (!std::binary_search(lists.lists[e].begin(), lists.lists[e].end(), c)) return "colour not in list";
        char& a = row[static_cast<std::size_t>(G.edges[e].row) * (n + 1) + c];
        char& b = col[static_cast<std::size_t>(G.edges[e].col) * (n + 1) + c];
        if (a || b) return "not proper";
        a = b = 1;
        if (++count[c] > f) return "multiplicity exceeded";
    }
    return {};
}

PartialLatinSquare build_R_and_merge(const ConflictGraph& G, const std::vector<int>& colors,
                                     const PartialLatinSquare& P) {
    if (colors.size() != G.edges.size()) throw InvalidInput("colour count differs from edge count");
    PartialLatinSquare out = P;
    for (std::size_t e = 0; e < colors.size(); ++e) {
        auto [r, c] = G.edges[e];
        if (!out.is_empty(r, c)) throw MergeClash("R and P' share a cell");
        out.set(r, c, colors[e]);
    }
    if (!validate_pls(out).clean()) throw MergeClash("merged square is not a partial Latin square");
    return out;
}

}  // namespace rlsc
