#include "doctest.h"
#include "rlsc/core.hpp"
#include "rlsc/starting.hpp"
#include "support.hpp"

using namespace rlsc;

namespace {
LatinSquare two() { return LatinSquare::from_rows({{1, 2}, {2, 1}}); }
}  // namespace

TEST_CASE("validate_pls") {
    CHECK(validate_pls(PartialLatinSquare(5)).clean());
    auto P = PartialLatinSquare::from_rows({{1, 1}, {0, 0}});
    auto rep = validate_pls(P);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == "row_duplicate");
    CHECK(rep.violations[0].cell == Cell{0, 1});
    CHECK(validate_pls(build_even(4).square.to_partial()).clean());

    auto Q = PartialLatinSquare::from_rows({{2, 0, 0}, {0, 0, 0}, {2, 0, 0}});
    auto rq = validate_pls(Q);
    REQUIRE(rq.violations.size() == 1);
    CHECK(rq.violations[0].kind == "col_duplicate");
}

TEST_CASE("LatinSquare rejects non-Latin grids") {
    CHECK_THROWS_AS(LatinSquare::from_rows({{1, 2}, {1, 2}}), InvalidInput);
    CHECK_THROWS_AS(LatinSquare::from_rows({{1, 2}, {2}}), InvalidInput);
    CHECK_NOTHROW(two());
}

TEST_CASE("is_alpha_dense") {
    CHECK(is_alpha_dense(PartialLatinSquare(7), 0.0));
    PartialLatinSquare P(10);
    P.set(0, 0, 3);
    CHECK(is_alpha_dense(P, 0.1));
    P.set(4, 5, 3);
    CHECK_FALSE(is_alpha_dense(P, 0.1));
}

TEST_CASE("is_mmm_array") {
    CHECK(is_mmm_array(AvoidanceArray(4), 0, 0, 0));
    AvoidanceArray A(2);
    A.insert(0, 0, 1);
    A.insert(0, 0, 2);
    CHECK_FALSE(is_mmm_array(A, 1, 5, 5));
    CHECK(is_mmm_array(A, 2, 1, 1));
    A.insert(0, 1, 1);
    CHECK_FALSE(is_mmm_array(A, 2, 1, 1));
    CHECK(is_mmm_array(A, 2, 2, 1));
}

TEST_CASE("conflict_cells") {
    AvoidanceArray A(2);
    CHECK(conflict_cells(two(), A).empty());
    A.insert(0, 0, 1);
    CHECK(conflict_cells(two(), A) == std::vector<Cell>{{0, 0}});
    CHECK(conflict_cells(LatinSquare::from_rows({{2, 1}, {1, 2}}), A).empty());
}

TEST_CASE("prescribed_cells") {
    CHECK(prescribed_cells(PartialLatinSquare(4)).empty());
    PartialLatinSquare P(4);
    P.set(0, 0, 1);
    P.set(2, 3, 2);
    CHECK(prescribed_cells(P) == std::vector<Cell>{{0, 0}, {2, 3}});
    CHECK(prescribed_cells(build_even(6).square.to_partial()).size() == 36);
}

TEST_CASE("strong and allowed intercalates") {
    const auto M = build_even(4).square;
    // rows 1,3 and columns 1,3 (1-based) carry symbols {1,3}
    Intercalate C{0, 2, 0, 2};
    REQUIRE(is_intercalate(M, C));
    CHECK(M.at(0, 0) == 1);
    CHECK(M.at(0, 2) == 3);
    CHECK(is_strong_intercalate(M, C));
    CHECK_FALSE(is_strong_pair(4, 1, 2));
    CHECK_FALSE(is_strong_pair(4, 3, 4));
    CHECK(is_strong_pair(4, 2, 3));
    CHECK_THROWS_AS(is_strong_intercalate(M, Intercalate{0, 1, 0, 2}), NotAnIntercalate);

    Intercalate W{0, 1, 0, 1};
    AvoidanceArray A(2);
    CHECK(is_allowed_intercalate(two(), W, A));
    A.insert(0, 0, 2);
    CHECK_FALSE(is_allowed_intercalate(two(), W, A));
    AvoidanceArray B(2);
    B.insert(0, 0, 1);
    CHECK(is_allowed_intercalate(two(), W, B));
}

TEST_CASE("swap_intercalate") {
    Intercalate W{0, 1, 0, 1};
    CHECK(swap_intercalate(two(), W) == LatinSquare::from_rows({{2, 1}, {1, 2}}));
    CHECK(swap_intercalate(swap_intercalate(two(), W), W) == two());

    const auto M = build_even(4).square;
    Intercalate C{0, 2, 0, 2};
    const auto S = swap_intercalate(M, C);
    CHECK(S.at(0, 0) == 3);
    CHECK(S.at(0, 2) == 1);
    CHECK(S.at(2, 0) == 1);
    CHECK(S.at(2, 2) == 3);
    int diff = 0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) diff += S.at(r, c) != M.at(r, c);
    CHECK(diff == 4);
}

TEST_CASE("swap is an involution on random squares") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + 2 * (trial % 4);
        auto L = testing::scramble_by_swaps(testing::random_isotope_of_cyclic(n, rng), 40, rng);
        for (const auto& C : strong_intercalates(L)) {
            CHECK(swap_intercalate(swap_intercalate(L, C), C) == L);
            break;
        }
    }
}

TEST_CASE("apply_trade") {
    CHECK(apply_trade(two(), Trade{}) == two());
    Intercalate W{0, 1, 0, 1};
    CHECK(apply_trade(two(), swap_trade(two(), W)) == swap_intercalate(two(), W));
    Trade bad;
    bad.entries = {{{0, 0}, 1, 2}};
    CHECK_THROWS_AS(apply_trade(two(), bad), NotLatinAfterTrade);
    Trade stale;
    stale.entries = {{{0, 0}, 2, 1}};
    CHECK_THROWS_AS(apply_trade(two(), stale), OldMismatch);
}

TEST_CASE("verify_solution") {
    PartialLatinSquare P(2);
    AvoidanceArray A(2);
    CHECK(verify_solution(two(), P, A).clean());
    P.set(0, 0, 2);
    auto rep = verify_solution(two(), P, A);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == "completion");
    CHECK(rep.violations[0].cell == Cell{0, 0});

    PartialLatinSquare E(2);
    A.insert(1, 1, 1);
    auto rc = verify_solution(two(), E, A);
    REQUIRE(rc.violations.size() == 1);
    CHECK(rc.violations[0].kind == "conflict");
    CHECK(rc.violations[0].cell == Cell{1, 1});
}

TEST_CASE("conflict set is empty iff verify reports no conflict") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + trial % 6;
        auto L = testing::random_isotope_of_cyclic(n, rng);
        AvoidanceArray A(n);
        std::uniform_int_distribution<int> sym(1, n), coin(0, 9);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (coin(rng) == 0) A.insert(r, c, sym(rng));
        auto rep = verify_solution(L, PartialLatinSquare(n), A);
        bool any_conflict = false;
        for (const auto& v : rep.violations) any_conflict |= v.kind == "conflict";
        CHECK(conflict_cells(L, A).empty() == !any_conflict);
    }
}

TEST_CASE("intercalate enumeration matches brute force") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 7;
        auto L = testing::scramble_by_swaps(testing::random_isotope_of_cyclic(n, rng), 30, rng);
        std::vector<Intercalate> brute;
        for (int r1 = 0; r1 < n; ++r1)
            for (int r2 = r1 + 1; r2 < n; ++r2)
                for (int c1 = 0; c1 < n; ++c1)
                    for (int c2 = c1 + 1; c2 < n; ++c2) {
                        Intercalate C{r1, r2, c1, c2};
                        if (is_intercalate(L, C) && is_strong_intercalate(L, C)) brute.push_back(C);
                    }
        auto fast = strong_intercalates(L);
        std::sort(fast.begin(), fast.end());
        std::sort(brute.begin(), brute.end());
        CHECK(fast == brute);
    }
}

TEST_CASE("params profiles") {
    auto p = Params::paper();
    CHECK(p.c(1000000) == 28);
    CHECK(p.f(1000000) == 57);
    CHECK(p.c(100) == 0);
    auto d = Params::desk();
    CHECK(d.c(60) == 3);
    CHECK(d.f(60) == 6);
    CHECK(d.c(10) == 1);
    CHECK(p.exceptional_budget(9) == 34);
}
