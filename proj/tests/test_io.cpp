#include <random>

#include "doctest.h"
#include "rlsc/gen.hpp"
#include "rlsc/io.hpp"
#include "rlsc/pipeline.hpp"

using namespace rlsc;

TEST_CASE("canonical JSON, literal form") {
    auto P = PartialLatinSquare::from_rows({{2, 0}, {0, 0}});
    CHECK(to_json(P) == "{\"cells\":[[1,1,2]],\"kind\":\"pls\",\"n\":2}\n");
    AvoidanceArray A(2);
    A.insert(0, 1, 2);
    A.insert(0, 1, 1);
    CHECK(to_json(A) == "{\"cells\":[[1,2,[1,2]]],\"kind\":\"array\",\"n\":2}\n");
    CHECK(to_text(P) == "2\n2 .\n. .\n");
    CHECK(to_text(A) == "2 array\n. 1,2\n. .\n");
}

TEST_CASE("round trips on random instances") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 60; ++it) {
        const int n = 1 + it % 13;
        const auto P = random_pls({n, 0.4}, rng);
        const auto A = random_array({n, it % 4 < n ? it % 4 : 0}, rng, P);
        for (const auto& s : {to_json(P), to_text(P)}) {
            const auto f = parse_instance(s);
            CHECK(f.grid == P);
            CHECK((f.kind == FileKind::Pls || P.filled_count() == n * n));
        }
        for (const auto& s : {to_json(A), to_text(A)}) {
            const auto f = parse_instance(s);
            CHECK(f.kind == FileKind::Array);
            CHECK(f.array == A);
        }
        CHECK(to_json(parse_instance(to_json(P)).grid) == to_json(P));
        CHECK(to_text(parse_instance(to_text(A)).array) == to_text(A));
    }
    const auto L = LatinSquare::from_rows({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}});
    const auto f = parse_instance(to_json(L));
    CHECK(f.kind == FileKind::Latin);
    CHECK(to_json(LatinSquare(3, f.grid.data())) == to_json(L));
    CHECK(parse_instance(to_text(L)).kind == FileKind::Latin);
}

TEST_CASE("malformed files") {
    for (const char* bad : {"", "{", "{\"kind\":\"pls\",\"n\":2}", "{\"kind\":\"x\",\"n\":2,\"cells\":[]}",
                            "{\"kind\":\"pls\",\"n\":2,\"cells\":[[3,1,1]]}",
                            "{\"kind\":\"pls\",\"n\":2,\"cells\":[[1,1,1],[1,1,2]]}",
                            "{\"kind\":\"pls\",\"n\":2,\"cells\":[[1,1,5]]}",
                            "{\"kind\":\"latin\",\"n\":2,\"cells\":[[1,1,1]]}",
                            "{\"kind\":\"array\",\"n\":2,\"cells\":[[1,1,1]]}", "2\n1 .\n", "2\n1 . 2\n. .\n",
                            "2\n1 x\n. .\n", "2\n1,2 .\n. .\n", "2 blocks\n. .\n. .\n", "2\n. .\n. .\n1\n"})
        CHECK_THROWS_AS(parse_instance(bad), ParseError);
}

TEST_CASE("trade log round trip and replay") {
    std::mt19937_64 rng(8);
    const int n = 40;
    const auto P = random_pls({n, 0.03}, rng);
    const auto A = random_array({n, 2}, rng, P);
    Params prm = Params::desk();
    prm.fallback_policy = FallbackPolicy::BestEffort;
    const auto out = solve(P, A, prm);
    REQUIRE(out.log.has_value());
    const auto text = trade_log_jsonl(*out.log);
    const auto back = parse_trade_log(text);
    CHECK(back.n == out.log->n);
    CHECK(back.scramble == out.log->scramble);
    CHECK(back.start == out.log->start);
    CHECK(back.trades == out.log->trades);
    CHECK(trade_log_jsonl(back) == text);
    if (out.square) CHECK(replay(back) == *out.square);
    CHECK_THROWS_AS(parse_trade_log(""), ParseError);
    CHECK_THROWS_AS(parse_trade_log("{\"n\":2}\n"), ParseError);
}

TEST_CASE("stats JSON keys") {
    PartialLatinSquare P(2);
    AvoidanceArray A(2);
    const auto j = stats_json(solve(P, A, Params::desk()));
    for (const char* k : {"mode", "scramble_tries", "q", "relaxations", "wall_ms", "status"}) CHECK(j.contains(k));
    CHECK_FALSE(stats_json(solve(P, A, Params::desk()), false).contains("wall_ms"));
}
