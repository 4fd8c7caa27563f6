#include <functional>

#include "doctest.h"
#include "rlsc/gen.hpp"
#include "rlsc/oracle.hpp"
#include "support.hpp"

using namespace rlsc;

namespace {

// Row-major backtracking with no propagation: the reference count.
long long naive_count(const PartialLatinSquare& P, const AvoidanceArray& A) {
    const int n = P.order();
    std::vector<int> g = P.data();
    std::function<long long(int)> go = [&](int pos) -> long long {
        if (pos == n * n) return 1;
        const int r = pos / n, c = pos % n;
        auto ok = [&](int s) {
            if (A.contains(r, c, s)) return false;
            for (int k = 0; k < n; ++k) {
                if (k != c && g[r * n + k] == s) return false;
                if (k != r && g[k * n + c] == s) return false;
            }
            return true;
        };
        if (P.at(r, c) != 0) return ok(P.at(r, c)) ? go(pos + 1) : 0;
        long long total = 0;
        for (int s = 1; s <= n; ++s)
            if (ok(s)) {
                g[r * n + c] = s;
                total += go(pos + 1);
                g[r * n + c] = 0;
            }
        return total;
    };
    return go(0);
}

SearchLimits counting() {
    SearchLimits l;
    l.max_solutions = 1'000'000;
    return l;
}

}  // namespace

TEST_CASE("solve_exact small examples") {
    AvoidanceArray A1(1);
    A1.insert(0, 0, 1);
    CHECK(solve_exact(PartialLatinSquare(1), A1).status == ExactStatus::Infeasible);

    const auto two = solve_exact(PartialLatinSquare(2), AvoidanceArray(2));
    REQUIRE(two.status == ExactStatus::Solved);
    CHECK(verify_solution(*two.square, PartialLatinSquare(2), AvoidanceArray(2)).clean());
}

TEST_CASE("count_exact frozen values") {
    CHECK(count_exact(PartialLatinSquare(2), AvoidanceArray(2), counting()) == 2);
    AvoidanceArray A(2);
    A.insert(0, 0, 1);
    CHECK(count_exact(PartialLatinSquare(2), A, counting()) == 1);
    CHECK(count_exact(PartialLatinSquare(3), AvoidanceArray(3), counting()) == 12);
    CHECK(count_exact(PartialLatinSquare(4), AvoidanceArray(4), counting()) == 576);
}

TEST_CASE("count_exact matches naive enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 120; ++trial) {
        const int n = 2 + trial % 3;
        const auto P = random_pls({n, 0.2}, rng);
        const auto A = random_array({n, trial % 2}, rng, P);
        CHECK(count_exact(P, A, counting()) == naive_count(P, A));
    }
}

TEST_CASE("count_exact is invariant under symbol relabelling") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4;
        const auto P = random_pls({n, 0.15}, rng);
        const auto A = random_array({n, 1}, rng, P);
        std::vector<int> pi(n + 1);
        for (int s = 0; s <= n; ++s) pi[s] = s;
        std::shuffle(pi.begin() + 1, pi.end(), rng);
        PartialLatinSquare P2(n);
        AvoidanceArray A2(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                P2.set(r, c, pi[P.at(r, c)]);
                for (int s : A.symbols(r, c)) A2.insert(r, c, pi[s]);
            }
        CHECK(count_exact(P, A, counting()) == count_exact(P2, A2, counting()));
    }
}

TEST_CASE("oracle solutions verify and infeasibility agrees with naive search") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 3 + trial % 2;
        const auto P = random_pls({n, 0.3}, rng);
        const auto A = random_array({n, 1 + trial % 2}, rng, P);
        const auto res = solve_exact(P, A);
        if (res.status == ExactStatus::Solved) CHECK(verify_solution(*res.square, P, A).clean());
        CHECK((res.status == ExactStatus::Solved) == (naive_count(P, A) > 0));
    }
}

TEST_CASE("limits") {
    SearchLimits tiny;
    tiny.max_nodes = 3;
    CHECK(solve_exact(PartialLatinSquare(9), AvoidanceArray(9), tiny).status == ExactStatus::LimitHit);
    SearchLimits few;
    few.max_solutions = 5;
    CHECK_THROWS_AS(count_exact(PartialLatinSquare(4), AvoidanceArray(4), few), LimitHit);
    CHECK_THROWS_AS(solve_exact(PartialLatinSquare(64), AvoidanceArray(64)), InvalidInput);
}
