#include <catch2/catch_amalgamated.hpp>

#include "qd/quiver.hpp"

using namespace qd;

namespace {

int gauge_node_id(const Quiver& q) {
    for (const auto& n : q.nodes)
        if (n.kind == QuiverNode::Kind::Gauge) return n.id;
    throw Error("no gauge node");
}

int gauge_rank(const Quiver& q) { return q.node(gauge_node_id(q)).rank; }

// The basic two-arrow quiver without the frozen section: gauge(r) -> E, F -> gauge.
Quiver build_basic(int m, int n, int r) {
    Quiver q;
    q.nodes = {{0, QuiverNode::Kind::Framed, "E", m},
               {1, QuiverNode::Kind::Framed, "F", n},
               {2, QuiverNode::Kind::Gauge, "", r}};
    q.edges = {{0, 2, 0, false, "X"}, {1, 1, 2, false, "P"}};
    q.validate();
    return q;
}

// A five-node example with arrow multiplicities: frame(m) -> gauge(r)
// -(n arrows)-> gauge(1) -(2 arrows)-> frame(4) -> gauge(2) -(4 arrows)-> gauge(1).
Quiver build_nested_example(int m, int n, int r) {
    Quiver q;
    q.nodes = {{0, QuiverNode::Kind::Framed, "M", m},
               {1, QuiverNode::Kind::Gauge, "", r},
               {2, QuiverNode::Kind::Gauge, "", 1},
               {3, QuiverNode::Kind::Framed, "T", 4},
               {4, QuiverNode::Kind::Gauge, "", 2}};
    int id = 0;
    q.edges.push_back({id++, 0, 1, false, "a"});
    for (int i = 0; i < n; ++i) q.edges.push_back({id++, 1, 2, false, "b"});
    for (int i = 0; i < 2; ++i) q.edges.push_back({id++, 2, 3, false, "c"});
    q.edges.push_back({id++, 3, 4, false, "d"});
    for (int i = 0; i < 4; ++i) q.edges.push_back({id++, 4, 2, false, "e"});
    q.validate();
    return q;
}

} // namespace

TEST_CASE("the two builders produce the documented data") {
    Quiver pax = build_pax(5, 4, 3);
    CHECK(pax.edges.size() == 3);
    CHECK(std::count_if(pax.edges.begin(), pax.edges.end(),
                        [](const QuiverEdge& e) { return e.frozen; }) == 1);
    CHECK(pax.superpotential.size() == 1);
    CHECK(gauge_rank(pax) == 3);

    Quiver paxy = build_paxy(5, 4, 2);
    CHECK(paxy.edges.size() == 4);
    CHECK(std::count_if(paxy.edges.begin(), paxy.edges.end(),
                        [](const QuiverEdge& e) { return e.frozen; }) == 1);
    CHECK(paxy.superpotential.size() == 2);
    CHECK(gauge_rank(paxy) == 2);

    CHECK_THROWS_AS(build_pax(5, 4, 5), RankError);
    CHECK_THROWS_AS(build_paxy(5, 4, 0), RankError);
}

TEST_CASE("mutation carries the PAX quiver to the PAXY quiver") {
    Quiver pax = build_pax(5, 4, 3);
    MutationResult res = mutate(pax, gauge_node_id(pax));
    CHECK(res.new_gauge_rank == 2);
    CHECK(quiver_equal(res.quiver, build_paxy(5, 4, 2)));
    // the old tr(PAX) cycle dies: its arrows are reversed
    CHECK_FALSE(res.warnings.empty());
    CHECK(res.added_edges.size() == 1);
    CHECK(res.reversed_edges.size() == 2);
    CHECK(res.deleted_pairs.empty());
}

TEST_CASE("mutated superpotential matches tr(P(A - YX)) up to rotation") {
    Quiver pax = build_pax(5, 4, 3);
    Quiver mut = mutate(pax, gauge_node_id(pax)).quiver;
    REQUIRE(mut.superpotential.size() == 2);
    // one +1 two-cycle through the frozen edge and one -1 three-cycle
    int plus = 0, minus = 0;
    for (const auto& t : mut.superpotential) {
        if (t.coeff == Rat(1)) {
            ++plus;
            CHECK(t.cycle.size() == 2);
        }
        if (t.coeff == Rat(-1)) {
            ++minus;
            CHECK(t.cycle.size() == 3);
        }
    }
    CHECK(plus == 1);
    CHECK(minus == 1);

    // rotating a superpotential cycle does not change the quiver
    Quiver rotated = build_paxy(5, 4, 2);
    std::rotate(rotated.superpotential[1].cycle.begin(),
                rotated.superpotential[1].cycle.begin() + 1,
                rotated.superpotential[1].cycle.end());
    rotated.validate();
    CHECK(quiver_equal(mut, rotated));
}

TEST_CASE("mutation of the basic quiver reverses and composes") {
    Quiver basic = build_basic(6, 2, 2);
    MutationResult res = mutate(basic, 2);
    CHECK(res.new_gauge_rank == 4); // max(n, m) - r = m - r
    // new composite arrow F -> E
    REQUIRE(res.added_edges.size() == 1);
    const QuiverEdge& comp = res.quiver.edge(res.added_edges[0]);
    CHECK(comp.src == 1);
    CHECK(comp.dst == 0);
    CHECK(res.quiver.superpotential.size() == 1); // the new triangle
}

TEST_CASE("exhaustive structural identity over the small rank range") {
    for (int m = 2; m <= 6; ++m)
        for (int n = 1; n <= m; ++n)
            for (int r = 1; r < m; ++r) {
                Quiver pax = build_pax(m, n, r);
                MutationResult res = mutate(pax, gauge_node_id(pax));
                CHECK(res.new_gauge_rank == m - r);
                CHECK(quiver_equal(res.quiver, build_paxy(m, n, m - r)));
            }
}

TEST_CASE("double mutation restores the gauge rank") {
    for (int m = 2; m <= 5; ++m)
        for (int n = 1; n <= m; ++n)
            for (int r = 1; r < m; ++r) {
                Quiver pax = build_pax(m, n, r);
                Quiver once = mutate(pax, gauge_node_id(pax)).quiver;
                MutationResult twice = mutate(once, gauge_node_id(once));
                CHECK(twice.new_gauge_rank == r);
                // full structural involutivity is reported, not required: the
                // superpotential cycle returns with coefficient -1 instead of +1
                Quiver back = twice.quiver;
                REQUIRE(back.superpotential.size() == 1);
                CHECK(back.superpotential[0].coeff == Rat(-1));
                CHECK(back.superpotential[0].cycle.size() == 3);
                CHECK_FALSE(quiver_equal(back, pax));
            }
}

TEST_CASE("frozen edges survive mutation untouched") {
    for (int m = 2; m <= 6; ++m)
        for (int r = 1; r < m; ++r) {
            Quiver pax = build_pax(m, 1, r);
            Quiver mut = mutate(pax, gauge_node_id(pax)).quiver;
            auto frozen_of = [](const Quiver& q) {
                std::vector<std::tuple<int, int, int>> out;
                for (const auto& e : q.edges)
                    if (e.frozen) out.emplace_back(e.id, e.src, e.dst);
                return out;
            };
            CHECK(frozen_of(pax) == frozen_of(mut));
        }
}

TEST_CASE("the rank rule on the nested example quiver") {
    // mutation at the rank-r gauge node: one incoming arrow from the rank-m
    // frame, n outgoing arrows to the rank-1 gauge node
    for (auto [m, n, r] : std::vector<std::tuple<int, int, int>>{{4, 4, 2}, {5, 3, 2}, {6, 2, 1}}) {
        Quiver qex = build_nested_example(m, n, r);
        MutationResult res = mutate(qex, 1);
        CHECK(res.new_gauge_rank == std::max(m, n) - r);
    }
}

TEST_CASE("quiver equality distinguishes and identifies correctly") {
    Quiver pax = build_pax(5, 4, 3);
    CHECK(quiver_equal(pax, pax));
    CHECK_FALSE(quiver_equal(pax, build_paxy(5, 4, 2)));               // different edge counts
    CHECK_FALSE(quiver_equal(build_pax(5, 4, 3), build_pax(5, 4, 2))); // different gauge rank
    CHECK_FALSE(quiver_equal(build_pax(5, 4, 3), build_pax(5, 3, 3))); // different frame rank

    // relabelled node ids are still equal
    Quiver shuffled = build_pax(5, 4, 3);
    for (auto& n : shuffled.nodes) n.id += 10;
    for (auto& e : shuffled.edges) {
        e.src += 10;
        e.dst += 10;
    }
    CHECK(quiver_equal(pax, shuffled));

    // a flipped superpotential coefficient is a different quiver
    Quiver flipped = build_paxy(5, 4, 2);
    flipped.superpotential[0].coeff = Rat(-1);
    CHECK_FALSE(quiver_equal(flipped, build_paxy(5, 4, 2)));
}

TEST_CASE("cycle enumeration") {
    Quiver pax = build_pax(5, 4, 3);
    auto pax_cycles = cycles(pax, 5);
    REQUIRE(pax_cycles.size() == 1);
    CHECK(pax_cycles[0].size() == 3);

    Quiver paxy = build_paxy(5, 4, 2);
    auto paxy_cycles = cycles(paxy, 3);
    REQUIRE(paxy_cycles.size() == 2);
    CHECK(paxy_cycles[0].size() + paxy_cycles[1].size() == 5); // one 2-cycle, one 3-cycle

    Quiver edgeless;
    edgeless.nodes = {{0, QuiverNode::Kind::Framed, "E", 2}};
    CHECK(cycles(edgeless, 4).empty());
}

TEST_CASE("every superpotential cycle after mutation is a closed walk") {
    for (int m = 2; m <= 6; ++m)
        for (int n = 1; n <= m; ++n)
            for (int r = 1; r < m; ++r) {
                Quiver mut = mutate(build_pax(m, n, r), 2).quiver;
                CHECK_NOTHROW(mut.validate()); // validate() checks closedness
            }
}

TEST_CASE("mutate rejects non-gauge nodes") {
    Quiver pax = build_pax(4, 2, 1);
    CHECK_THROWS_AS(mutate(pax, 0), NotGaugeNode);
}

TEST_CASE("JSON round trip preserves the quiver and the bytes") {
    std::vector<Quiver> samples = {build_pax(5, 4, 3), build_paxy(4, 2, 1),
                                   mutate(build_pax(3, 2, 1), 2).quiver,
                                   build_nested_example(4, 4, 2)};
    for (const auto& q : samples) {
        nlohmann::json j = to_json(q);
        Quiver back = quiver_from_json(j);
        CHECK(quiver_equal(q, back));
        CHECK(to_json(back).dump(2) == j.dump(2));
    }
}

TEST_CASE("malformed quiver JSON raises a config error") {
    CHECK_THROWS_AS(quiver_from_json(nlohmann::json::parse(R"({"nodes": []})")), ConfigError);
    CHECK_THROWS_AS(quiver_from_json(nlohmann::json::parse(
                        R"({"nodes": [{"id":0,"kind":"square","rank":1}], "edges": []})")),
                    ConfigError);
}

TEST_CASE("DOT export marks shapes and frozen edges") {
    std::string dot = to_dot(build_pax(5, 4, 3));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("shape=circle") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);
}
