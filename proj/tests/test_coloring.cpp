#include <algorithm>
#include <functional>
#include <set>

#include "doctest.h"
#include "rlsc/coloring.hpp"
#include "rlsc/gen.hpp"
#include "rlsc/starting.hpp"

using namespace rlsc;

namespace {

ConflictGraph graph(int n, std::vector<Cell> edges) {
    std::sort(edges.begin(), edges.end());
    return ConflictGraph{n, std::move(edges)};
}

// Random bipartite graph with `edge_count` edges (fewer if saturated), max degree
// <= delta, and random lists of size >= min_list.
std::pair<ConflictGraph, ListAssignment> random_instance(int n, int delta, int edge_count, int min_list,
                                                         std::mt19937_64& rng) {
    std::uniform_int_distribution<int> v(0, n - 1);
    std::vector<int> rd(n, 0), cd(n, 0);
    std::set<Cell> edges;
    for (int attempt = 0; attempt < 50 * edge_count && static_cast<int>(edges.size()) < edge_count; ++attempt) {
        const int r = v(rng), c = v(rng);
        if (rd[r] == delta || cd[c] == delta || edges.count({r, c})) continue;
        ++rd[r];
        ++cd[c];
        edges.insert({r, c});
    }
    ConflictGraph G = graph(n, {edges.begin(), edges.end()});
    ListAssignment L;
    std::uniform_int_distribution<int> extra(0, 10);
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i + 1;
    for (std::size_t e = 0; e < G.edges.size(); ++e) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> l(pool.begin(), pool.begin() + min_list + extra(rng));
        std::sort(l.begin(), l.end());
        L.lists.push_back(std::move(l));
    }
    return {G, L};
}

// True if some proper in-list colouring with multiplicity <= f exists.
bool exists_coloring(const ConflictGraph& G, const ListAssignment& L, int f) {
    std::vector<int> col(G.edges.size(), 0);
    std::function<bool(std::size_t)> go = [&](std::size_t e) {
        if (e == col.size()) return check_edge_coloring(G, L, col, f).empty();
        for (int c : L.lists[e]) {
            col[e] = c;
            if (go(e + 1)) return true;
        }
        return false;
    };
    return go(0);
}

}  // namespace

TEST_CASE("conflict graph and lists") {
    const auto M = build_even(6).square;
    CHECK(build_conflict_graph(M, AvoidanceArray(6), PartialLatinSquare(6)).edges.empty());

    AvoidanceArray A(6);
    A.insert(1, 2, M.at(1, 2));
    CHECK(build_conflict_graph(M, A, PartialLatinSquare(6)).edges == std::vector<Cell>{{1, 2}});
    PartialLatinSquare P(6);
    P.set(1, 2, M.at(1, 2) % 6 + 1);
    CHECK(build_conflict_graph(M, A, P).edges.empty());

    const auto G = graph(5, {{0, 1}});
    AvoidanceArray A5(5);
    A5.insert(0, 1, 3);
    PartialLatinSquare P5(5);
    P5.set(0, 4, 4);
    CHECK(build_lists(G, A5, P5).lists[0] == std::vector<int>{1, 2, 5});
    CHECK(build_lists(G, AvoidanceArray(5), PartialLatinSquare(5)).lists[0] == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("small colourings") {
    std::mt19937_64 rng(1);
    const auto one = graph(8, {{2, 3}});
    CHECK(list_edge_color_bounded(one, {{{7}}}, 1, rng) == std::vector<int>{7});

    const auto two = graph(3, {{0, 0}, {0, 1}});
    const auto c2 = list_edge_color_bounded(two, {{{1, 2}, {1, 2}}}, 2, rng);
    CHECK(std::set<int>(c2.begin(), c2.end()) == std::set<int>{1, 2});

    // Stars with c edges, lists of size c, f = 1: all colours distinct.
    for (int c = 1; c <= 4; ++c)
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Cell> e;
            for (int j = 0; j < c; ++j) e.push_back({0, j});
            const auto G = graph(8, e);
            ListAssignment L;
            std::vector<int> pool{1, 2, 3, 4, 5, 6, 7, 8};
            for (int j = 0; j < c; ++j) {
                std::shuffle(pool.begin(), pool.end(), rng);
                std::vector<int> l(pool.begin(), pool.begin() + c);
                std::sort(l.begin(), l.end());
                L.lists.push_back(l);
            }
            REQUIRE(exists_coloring(G, L, 1));
            const auto col = list_edge_color_bounded(G, L, 1, rng);
            CHECK(check_edge_coloring(G, L, col, 1).empty());
            CHECK(std::set<int>(col.begin(), col.end()).size() == static_cast<std::size_t>(c));
        }
}

TEST_CASE("check_edge_coloring catches each defect") {
    const auto G = graph(4, {{0, 0}, {0, 1}, {1, 0}});
    const ListAssignment L{{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}};
    CHECK(check_edge_coloring(G, L, {1, 2, 2}, 3).empty());
    CHECK(check_edge_coloring(G, L, {1, 1, 2}, 3) == "not proper");
    CHECK(check_edge_coloring(G, L, {1, 2, 4}, 3) == "colour not in list");
    CHECK(check_edge_coloring(G, L, {1, 2, 2}, 1) == "multiplicity exceeded");
    CHECK_FALSE(check_edge_coloring(G, L, {1, 2}, 3).empty());
}

TEST_CASE("multiplicity bound forces spreading") {
    // Perfect matching of 6 edges, all lists {1,2,3}, f = 2: each colour exactly twice.
    std::mt19937_64 rng(2);
    std::vector<Cell> e;
    for (int i = 0; i < 6; ++i) e.push_back({i, i});
    const auto G = graph(6, e);
    const ListAssignment L{std::vector<std::vector<int>>(6, {1, 2, 3})};
    for (int trial = 0; trial < 30; ++trial) {
        const auto col = list_edge_color_bounded(G, L, 2, rng);
        CHECK(check_edge_coloring(G, L, col, 2).empty());
    }
    const ListAssignment tight{std::vector<std::vector<int>>(6, {1, 2})};
    CHECK_THROWS_AS(list_edge_color_bounded(G, tight, 2, rng), ColoringFailed);
}

TEST_CASE("random bounded colourings") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto [G, L] = random_instance(100, 5, 250, 20, rng);
        REQUIRE(G.max_degree() <= 5);
        REQUIRE(L.min_size() >= 20);
        const auto col = list_edge_color_bounded(G, L, 3, rng);
        CHECK(check_edge_coloring(G, L, col, 3).empty());
    }
}

TEST_CASE("colouring is deterministic given the seed") {
    std::mt19937_64 gen(4);
    const auto [G, L] = random_instance(60, 4, 100, 15, gen);
    std::mt19937_64 a(9), b(9);
    CHECK(list_edge_color_bounded(G, L, 3, a) == list_edge_color_bounded(G, L, 3, b));
}

TEST_CASE("R merge") {
    PartialLatinSquare P(5);
    P.set(0, 0, 1);
    CHECK(build_R_and_merge(graph(5, {}), {}, P) == P);
    const auto merged = build_R_and_merge(graph(5, {{1, 2}}), {5}, PartialLatinSquare(5));
    CHECK(merged.filled_count() == 1);
    CHECK(merged.at(1, 2) == 5);
    CHECK_THROWS_AS(build_R_and_merge(graph(5, {{0, 0}}), {2}, P), MergeClash);
    CHECK_THROWS_AS(build_R_and_merge(graph(5, {{0, 3}}), {1}, P), MergeClash);
}

TEST_CASE("pipeline-shaped merge keeps P-hat avoiding A") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 40;
        const auto L0 = build_even(n).square;
        const auto P = random_pls({n, 0.03}, rng);
        const auto A = random_array({n, 2}, rng, P);
        const auto G = build_conflict_graph(L0, A, P);
        const auto lists = build_lists(G, A, P);
        const int f = 4;
        const auto col = list_edge_color_bounded(G, lists, f, rng);
        REQUIRE(check_edge_coloring(G, lists, col, f).empty());
        const auto Phat = build_R_and_merge(G, col, P);
        CHECK(validate_pls(Phat).clean());
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                if (!Phat.is_empty(r, c)) CHECK_FALSE(A.contains(r, c, Phat.at(r, c)));
                // Every conflict of L0 is now prescribed with a different entry.
                if (A.contains(r, c, L0.at(r, c))) CHECK((!Phat.is_empty(r, c) && Phat.at(r, c) != L0.at(r, c)));
            }
    }
}
