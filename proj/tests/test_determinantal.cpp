#include <catch2/catch_amalgamated.hpp>

#include "qd/determinantal.hpp"

using namespace qd;

TEST_CASE("codimension of the rank-drop locus") {
    CHECK(codim(DetConfig(4, 4, 2)) == 4);
    CHECK(codim(DetConfig(5, 3, 3)) == 0); // s = n: full-rank locus
    CHECK(codim(DetConfig(5, 5, 1)) == 16);
    CHECK(dim_proj(DetConfig::proj(5, 5, 1, 19)) == 3);
    CHECK_THROWS_AS(DetConfig(3, 4, 2), ShapeMismatch); // needs n <= m
}

TEST_CASE("codimension plus dimension recovers the ambient dimension") {
    for (int m = 2; m <= 6; ++m)
        for (int s = 0; s < m; ++s)
            for (int N = 1; N <= 30; N += 7) {
                DetConfig cfg = DetConfig::proj(m, m, s, N);
                CHECK(codim(cfg) + dim_proj(cfg) == N);
            }
}

TEST_CASE("codimension is strictly decreasing in s") {
    for (int m = 2; m <= 8; ++m)
        for (int n = 1; n <= m; ++n)
            for (int s = 0; s + 1 < n; ++s)
                CHECK(codim(DetConfig(m, n, s)) > codim(DetConfig(m, n, s + 1)));
}

TEST_CASE("the dimension-3 classification is the known triple list") {
    auto triples = cy_classify(8, 30);
    REQUIRE(triples.size() == 3);
    CHECK(triples[0] == std::array<int, 3>{1, 5, 19});
    CHECK(triples[1] == std::array<int, 3>{2, 4, 7});
    CHECK(triples[2] == std::array<int, 3>{4, 5, 4});

    auto tight = cy_classify(4, 7);
    REQUIRE(tight.size() == 1);
    CHECK(tight[0] == std::array<int, 3>{2, 4, 7});

    // stable under raising bounds
    CHECK(cy_classify(12, 60) == triples);
}

TEST_CASE("the dimension-2 variant against a brute-force oracle") {
    // independent enumeration written as a plain triple loop
    std::vector<std::array<int, 3>> expected;
    for (int s = 0; s <= 12; ++s)
        for (int m = s + 1; m <= 12; ++m)
            for (int N = 1; N <= 60; ++N)
                if (N + 1 == (m - s) * m && N - (m - s) * (m - s) == 2)
                    expected.push_back({s, m, N});
    std::sort(expected.begin(), expected.end());
    CHECK(cy_classify(12, 60, 2) == expected);
    CHECK_FALSE(expected.empty());
}

TEST_CASE("the square threefold preset on P^7") {
    Scenario sc = scenario_gn_threefold();
    CHECK(sc.shape.m == 4);
    CHECK(sc.shape.n == 4);
    CHECK(sc.shape.r == 2);
    REQUIRE(sc.betas.size() == 3);
    for (long d = 0; d <= 2; ++d) {
        CHECK(sc.betas[static_cast<std::size_t>(d)].bx == std::vector<long>{0, 0, 0, 0});
        CHECK(sc.betas[static_cast<std::size_t>(d)].bz == std::vector<long>{-d, -d, -d, -d});
        CHECK(sc.betas[static_cast<std::size_t>(d)].ample);
    }
    // its numerology: codim 4 in P^7, dimension 3
    CHECK(codim(DetConfig(4, 4, 2)) == 4);
    CHECK(dim_proj(DetConfig::proj(4, 4, 2, 7)) == 3);
}

TEST_CASE("generic sweeps honor the positivity flag") {
    Scenario sc = scenario_generic(3, 1, 1, true);
    CHECK_FALSE(sc.betas.empty());
    for (const auto& beta : sc.betas) {
        CHECK(beta.ample);
        CHECK(satisfies_ample(beta));
    }
}

TEST_CASE("generic sweep size equals the brute-force count") {
    // unconstrained: all vectors with entries in [-2,2]
    Scenario all = scenario_generic(2, 2, 1, false);
    CHECK(all.betas.size() == 5 * 5 * 5 * 5);

    // constrained: count by direct enumeration
    long count = 0;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c)
                for (long d = -2; d <= 2; ++d)
                    if (std::min(a, b) >= std::max(c, d)) ++count;
    Scenario ample = scenario_generic(2, 2, 1, true);
    CHECK(static_cast<long>(ample.betas.size()) == count);
}

TEST_CASE("unknown scenario names are rejected") {
    CHECK_THROWS_AS(scenario_preset("no-such-thing"), UnknownScenario);
    CHECK(scenario_preset("gn-3fold").name == "gn-3fold");
    CHECK(scenario_preset("generic", 3, 1, 1, true).betas.size() ==
          scenario_generic(3, 1, 1, true).betas.size());
}
