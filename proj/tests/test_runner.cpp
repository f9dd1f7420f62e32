#include <catch2/catch_amalgamated.hpp>

#include "qd/runner.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

using namespace qd;

namespace {

nlohmann::json strip_timing(nlohmann::json j) {
    if (j.is_object()) {
        j.erase("elapsed_ms");
        for (auto& [k, v] : j.items()) {
            (void)k;
            v = strip_timing(v);
        }
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_timing(v);
    }
    return j;
}

} // namespace

TEST_CASE("beta selection is deterministic and honors regimes") {
    ModelShape sh(3, 2, 1);
    auto a = select_betas(sh, 5, true);
    auto b = select_betas(sh, 5, true);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    for (const auto& beta : a) CHECK(satisfies_ample(beta));

    auto both = select_betas_both_regimes(sh, 5);
    CHECK(both.size() >= 5);
    bool has_nonample = false;
    for (const auto& beta : both) has_nonample |= !beta.ample;
    CHECK(has_nonample);
}

TEST_CASE("degree vector selection always contains the zero vector") {
    for (int rank = 1; rank <= 3; ++rank) {
        auto degs = select_degree_vectors(rank, 10);
        bool has_zero = false;
        for (const auto& d : degs)
            has_zero |= d == DegreeVector(static_cast<std::size_t>(rank), 0);
        CHECK(has_zero);
        for (const auto& d : degs)
            for (long v : d) {
                CHECK(v >= -3);
                CHECK(v <= 3);
            }
        // rank 1 has only 7 possible vectors; larger ranks meet the request
        if (rank > 1) CHECK(degs.size() >= 10);
    }
}

TEST_CASE("run_checks honors fail_fast") {
    int executed = 0;
    auto failing = [&]() {
        ++executed;
        Report rep;
        CheckRecord rec;
        rec.id = "fake/failing";
        rec.pass = false;
        rep.checks.push_back(rec);
        return rep;
    };
    auto passing = [&]() {
        ++executed;
        Report rep;
        CheckRecord rec;
        rec.id = "fake/passing";
        rec.pass = true;
        rep.checks.push_back(rec);
        return rep;
    };

    executed = 0;
    Report stop = run_checks({failing, passing}, true);
    CHECK(executed == 1);
    CHECK(stop.checks.size() == 1);

    executed = 0;
    Report go_on = run_checks({failing, passing}, false);
    CHECK(executed == 2);
    CHECK(go_on.checks.size() == 2);
    CHECK_FALSE(go_on.all_pass());
}

TEST_CASE("a small proposition run emits a valid passing report") {
    RunConfig config;
    config.suite = Suite::Propositions;
    config.m = 3;
    config.n = 1;
    config.r = 1;
    config.max_betas = 2;
    config.a_max = 2;
    config.seed = 7;
    config.points = 10;

    std::ostringstream out;
    int code = run(config, out);
    CHECK(code == 0);

    nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j.at("schema") == 1);
    CHECK(j.at("pass") == true);
    CHECK(j.at("counts").at("fail") == 0);
    CHECK(j.at("config").at("suite") == "propositions");
    REQUIRE(!j.at("checks").empty());
    for (const auto& rec : j.at("checks")) {
        CHECK(rec.contains("id"));
        CHECK(rec.contains("statement"));
        CHECK(rec.at("pass") == true);
    }
    // canonical ordering: ids are non-decreasing
    std::string prev;
    for (const auto& rec : j.at("checks")) {
        std::string id = rec.at("id").get<std::string>();
        CHECK(prev <= id);
        prev = id;
    }
}

TEST_CASE("equal configs give byte-identical reports modulo timing") {
    RunConfig config;
    config.suite = Suite::Propositions;
    config.m = 2;
    config.n = 2;
    config.r = 1;
    config.max_betas = 2;
    config.a_max = 1;
    config.seed = 11;
    config.points = 5;

    std::ostringstream out1, out2;
    run(config, out1);
    run(config, out2);
    auto j1 = strip_timing(nlohmann::json::parse(out1.str()));
    auto j2 = strip_timing(nlohmann::json::parse(out2.str()));
    CHECK(j1.dump(2) == j2.dump(2));

    // omitting timing makes the raw bytes identical
    config.include_timing = false;
    std::ostringstream out3, out4;
    run(config, out3);
    run(config, out4);
    CHECK(out3.str() == out4.str());
    CHECK(out3.str() != "");

    // a different seed changes sampled points but not the verdict
    RunConfig other = config;
    other.seed = 12;
    std::ostringstream out5;
    CHECK(run(other, out5) == 0);
}

TEST_CASE("the quiver and determinantal suites run quickly and pass") {
    RunConfig config;
    config.suite = Suite::Quiver;
    std::ostringstream out;
    CHECK(run(config, out) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    // exhaustive over 2 <= m <= 6: sum over m of m*(m-1) shapes
    CHECK(j.at("checks").size() == 2 + 6 + 12 + 20 + 30);

    RunConfig det;
    det.suite = Suite::Determinantal;
    std::ostringstream out2;
    CHECK(run(det, out2) == 0);
}

TEST_CASE("the theorem suite on one shape covers offsets and kernels") {
    RunConfig config;
    config.suite = Suite::Theorems;
    config.m = 3;
    config.n = 2;
    config.r = 1;
    config.max_betas = 1;
    config.order = 2;
    config.points = 5;
    config.seed = 3;
    std::ostringstream out;
    CHECK(run(config, out) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    std::set<std::string> ids;
    for (const auto& rec : j.at("checks")) ids.insert(rec.at("id").get<std::string>());
    CHECK(ids.count("cov-offset/integer-box"));
    CHECK(ids.count("kernel/exp-coefficient"));
    CHECK(ids.count("kernel/binom-truncation"));
    CHECK(ids.count("series-duality/gr/corank-1"));
    CHECK(ids.count("series-duality/paxpaxy/corank-1"));
    CHECK(ids.count("series-duality/gr/offset"));
    CHECK(ids.count("common-factor/gr"));
    CHECK(ids.count("common-factor/paxpaxy"));
}

TEST_CASE("text format emits one line per check plus a summary") {
    RunConfig config;
    config.suite = Suite::Determinantal;
    config.format = RunConfig::Format::Text;
    std::ostringstream out;
    CHECK(run(config, out) == 0);
    std::string text = out.str();
    CHECK(text.find("PASS determinantal/cy-classification") != std::string::npos);
    CHECK(text.rfind("OK: ") != std::string::npos);
}

TEST_CASE("config validation raises config errors") {
    RunConfig bad;
    bad.points = 0;
    std::ostringstream out;
    CHECK_THROWS_AS(run(bad, out), ConfigError);

    RunConfig partial;
    partial.m = 3; // n, r missing
    CHECK_THROWS_AS(run(partial, out), ConfigError);

    RunConfig badbeta;
    badbeta.beta_source = "nope";
    CHECK_THROWS_AS(run(badbeta, out), ConfigError);
}

TEST_CASE("QD_SEED overrides the configured seed") {
    RunConfig config;
    config.seed = 5;
    setenv("QD_SEED", "99", 1);
    CHECK(resolve_seed(config) == 99);
    setenv("QD_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(resolve_seed(config), ConfigError);
    unsetenv("QD_SEED");
    CHECK(resolve_seed(config) == 5);
}

TEST_CASE("the gn-3fold preset drives the proposition suite") {
    RunConfig config;
    config.suite = Suite::Propositions;
    config.beta_source = "gn-3fold";
    config.a_max = 2;
    config.points = 10;
    config.seed = 4;
    std::ostringstream out;
    CHECK(run(config, out) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    for (const auto& rec : j.at("checks")) {
        CHECK(rec.at("shape").at("m") == 4);
        CHECK(rec.at("shape").at("n") == 4);
        CHECK(rec.at("id").get<std::string>().find("equal-rank") != std::string::npos);
    }
}
