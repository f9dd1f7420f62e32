#pragma once

#include "qd/determinantal.hpp"
#include "qd/quiver.hpp"
#include "qd/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qd {

enum class Suite { Propositions, Theorems, LemmaForms, Quiver, Determinantal, All };

inline Suite suite_from_string(const std::string& s) {
    if (s == "propositions") return Suite::Propositions;
    if (s == "theorems") return Suite::Theorems;
    if (s == "lemma-forms") return Suite::LemmaForms;
    if (s == "quiver") return Suite::Quiver;
    if (s == "determinantal") return Suite::Determinantal;
    if (s == "all") return Suite::All;
    throw ConfigError("unknown suite '" + s + "'");
}

inline const char* suite_name(Suite s) {
    switch (s) {
    case Suite::Propositions: return "propositions";
    case Suite::Theorems: return "theorems";
    case Suite::LemmaForms: return "lemma-forms";
    case Suite::Quiver: return "quiver";
    case Suite::Determinantal: return "determinantal";
    default: return "all";
    }
}

struct RunConfig {
    Suite suite = Suite::All;
    std::optional<int> m, n, r; // exact shape override; otherwise the default grids
    int m_max = 4;              // bound for the series/lemma shape grids
    int quiver_m_max = 6;
    std::string beta_source = "sweep"; // "sweep" or "gn-3fold"
    int max_betas = 5;                 // per shape and constraint regime
    int degree_vectors = 10;           // per beta in the lemma suite
    long a_max = 3;
    int order = 4;
    std::uint64_t seed = 0;
    int points = 20;
    enum class Format { Json, Text } format = Format::Json;
    bool fail_fast = false;
    bool include_timing = true;

    void validate() const {
        if (m_max < 2 || quiver_m_max < 2) throw ConfigError("config: rank bounds must be >= 2");
        if (points < 1) throw ConfigError("config: points must be >= 1");
        if (max_betas < 1 || degree_vectors < 1)
            throw ConfigError("config: sweep sizes must be >= 1");
        if (a_max < 0 || order < 0) throw ConfigError("config: a_max and order must be >= 0");
        if (beta_source != "sweep" && beta_source != "gn-3fold")
            throw ConfigError("config: beta source must be 'sweep' or 'gn-3fold'");
        bool partial = m.has_value() || n.has_value() || r.has_value();
        bool full = m.has_value() && n.has_value() && r.has_value();
        if (partial && !full) throw ConfigError("config: m, n, r must be given together");
        if (full) ModelShape(*m, *n, *r); // validates
    }

    std::optional<ModelShape> exact_shape() const {
        if (m.has_value()) return ModelShape(*m, *n, *r);
        return std::nullopt;
    }
};

/// QD_SEED in the environment overrides the configured seed.
inline std::uint64_t resolve_seed(const RunConfig& config) {
    if (const char* env = std::getenv("QD_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("QD_SEED must be an unsigned integer");
        }
    }
    return config.seed;
}

/// Deferred check: builds and evaluates its expressions only when invoked, so
/// fail-fast runs skip unneeded assembly work entirely.
using Check = std::function<Report()>;

inline Report run_checks(const std::vector<Check>& checks, bool fail_fast) {
    Report out;
    for (const auto& check : checks) {
        out.append(check());
        if (fail_fast && !out.all_pass()) break;
    }
    return out;
}

// ---- deterministic sweeps ----------------------------------------------------

/// Evenly strided selection from the full [-2,2] pairing sweep of the shape.
inline std::vector<BetaClass> select_betas(const ModelShape& shape, int count, bool ample_only) {
    std::vector<BetaClass> sweep = scenario_generic(shape.m, shape.n, shape.r, ample_only).betas;
    if (count >= static_cast<int>(sweep.size())) return sweep;
    std::vector<BetaClass> out;
    for (int i = 0; i < count; ++i) {
        std::size_t idx = count == 1 ? 0
                                     : static_cast<std::size_t>(i) * (sweep.size() - 1) /
                                           (static_cast<std::size_t>(count) - 1);
        if (out.empty() || !(out.back() == sweep[idx])) out.push_back(sweep[idx]);
    }
    return out;
}

/// Both constraint regimes: positivity-constrained and unconstrained vectors.
inline std::vector<BetaClass> select_betas_both_regimes(const ModelShape& shape, int per_regime) {
    std::vector<BetaClass> out = select_betas(shape, per_regime, true);
    for (auto& beta : select_betas(shape, per_regime, false)) {
        bool dup = false;
        for (const auto& b : out) dup |= b == beta;
        if (!dup) out.push_back(beta);
    }
    return out;
}

/// Evenly strided degree vectors with entries in [-3,3], zero vector included.
inline std::vector<DegreeVector> select_degree_vectors(int rank, int count) {
    std::vector<DegreeVector> sweep;
    DegreeVector cur(static_cast<std::size_t>(rank), -3);
    while (true) {
        sweep.push_back(cur);
        std::size_t i = 0;
        while (i < cur.size() && cur[i] == 3) cur[i++] = -3;
        if (i == cur.size()) break;
        ++cur[i];
    }
    std::vector<DegreeVector> out{DegreeVector(static_cast<std::size_t>(rank), 0)};
    for (int i = 0; i < count; ++i) {
        std::size_t idx = count == 1 ? 0
                                     : static_cast<std::size_t>(i) * (sweep.size() - 1) /
                                           (static_cast<std::size_t>(count) - 1);
        if (!(sweep[idx] == out.front())) out.push_back(sweep[idx]);
        if (static_cast<int>(out.size()) > count) break;
    }
    return out;
}

/// Shape grid for the series suites: 2 <= m <= m_max, 1 <= n <= m, 1 <= r < m.
inline std::vector<ModelShape> shape_grid(int m_max) {
    std::vector<ModelShape> out;
    for (int m = 2; m <= m_max; ++m)
        for (int n = 1; n <= m; ++n)
            for (int r = 1; r < m; ++r) out.emplace_back(m, n, r);
    return out;
}

// ---- suites -------------------------------------------------------------------

/// Lemma suite: direct vs factored forms for all four models over the shape
/// grid, both beta regimes, strided degree vectors.
inline std::vector<Check> lemma_suite_checks(const RunConfig& config, std::uint64_t seed) {
    std::vector<Check> checks;
    std::vector<ModelShape> shapes =
        config.exact_shape() ? std::vector<ModelShape>{*config.exact_shape()}
                             : shape_grid(config.m_max);
    for (const ModelShape& shape : shapes) {
        for (const BetaClass& beta : select_betas_both_regimes(shape, config.max_betas)) {
            for (Model model : {Model::GR, Model::GR_HAT, Model::PAX, Model::PAXY}) {
                for (const DegreeVector& d :
                     select_degree_vectors(model_rank(model, shape), config.degree_vectors)) {
                    int points = config.points;
                    checks.push_back([=]() {
                        Report rep;
                        rep.checks.push_back(check_two_form(model, shape, beta, d, seed, points));
                        return rep;
                    });
                }
            }
        }
    }
    return checks;
}

namespace detail {

inline std::vector<BetaClass> betas_for(const RunConfig& config, const ModelShape& shape) {
    if (config.beta_source == "gn-3fold") return scenario_gn_threefold().betas;
    return select_betas_both_regimes(shape, config.max_betas);
}

} // namespace detail

/// Proposition suite: all three corank cases on their shape lists, both
/// collapsed-coefficient families.
inline std::vector<Check> proposition_suite_checks(const RunConfig& config, std::uint64_t seed) {
    std::vector<Check> checks;
    std::vector<ModelShape> shapes;
    if (config.beta_source == "gn-3fold") {
        shapes.push_back(scenario_gn_threefold().shape);
    } else if (config.exact_shape()) {
        shapes.push_back(*config.exact_shape());
    } else {
        shapes = shape_grid(config.m_max);
    }
    for (const ModelShape& shape : shapes) {
        PropCase pcase = case_for_shape(shape);
        for (const BetaClass& beta : detail::betas_for(config, shape)) {
            for (Which which : {Which::GR, Which::PAXPAXY}) {
                long a_max = config.a_max;
                int points = config.points;
                checks.push_back([=]() {
                    return verify_proposition(pcase, which, shape, beta, a_max, seed, points);
                });
            }
        }
    }
    return checks;
}

/// Theorem suite: both series dualities coefficientwise at every fixed point,
/// plus the integer offset identities and the kernel spot values.
inline std::vector<Check> theorem_suite_checks(const RunConfig& config, std::uint64_t seed) {
    std::vector<Check> checks;
    std::vector<ModelShape> shapes;
    if (config.beta_source == "gn-3fold") {
        shapes.push_back(scenario_gn_threefold().shape);
    } else if (config.exact_shape()) {
        shapes.push_back(*config.exact_shape());
    } else {
        shapes = shape_grid(config.m_max);
    }

    for (const ModelShape& shape : shapes) {
        PropCase pcase = case_for_shape(shape);
        std::vector<BetaClass> betas = detail::betas_for(config, shape);
        for (const BetaClass& beta : betas) {
            for (Theorem which : {Theorem::BUILDING_BLOCK, Theorem::PAX_PAXY}) {
                for (const FixedPoint& fp : enumerate_fixed_points(shape, Side::Primal)) {
                    int order = config.order;
                    int points = config.points;
                    checks.push_back([=]() {
                        return verify_theorem(which, pcase, shape, fp, beta, order, seed, points);
                    });
                }
            }
        }
        // integer offset identities over the full [-3,3] pairing box
        checks.push_back([shape]() {
            detail::Stopwatch sw;
            CheckRecord rec;
            rec.id = "cov-offset/integer-box";
            rec.statement = "q1 exponent rewrites hold for every pairing vector in [-3,3]^(m+n)";
            rec.m = shape.m;
            rec.n = shape.n;
            rec.r = shape.r;
            std::vector<long> entries(static_cast<std::size_t>(shape.m + shape.n), -3);
            bool ok = true;
            std::vector<long> bad;
            while (ok) {
                BetaClass beta;
                beta.bx.assign(entries.begin(), entries.begin() + shape.m);
                beta.bz.assign(entries.begin() + shape.m, entries.end());
                for (long a = 0; a <= 4 && ok; ++a)
                    if (!offset_identities_hold(shape, beta, a)) {
                        ok = false;
                        bad = entries;
                    }
                std::size_t i = 0;
                while (i < entries.size() && entries[i] == 3) entries[i++] = -3;
                if (i == entries.size()) break;
                ++entries[i];
            }
            rec.pass = ok;
            if (!ok) {
                rec.witness = "failing pairing vector:";
                for (long v : bad) rec.witness += " " + std::to_string(v);
            }
            rec.elapsed_ms = sw.ms();
            Report rep;
            rep.checks.push_back(std::move(rec));
            return rep;
        });
    }

    // kernel spot values, once per run
    checks.push_back([seed]() {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = "kernel/exp-coefficient";
        rec.statement = "exponential kernel coefficient at a=2 with odd rank equals z^{-2}/2";
        rec.points = 5;
        ModelShape sh(3, 2, 2); // s = 1
        BetaClass b0;
        b0.bx.assign(3, 0);
        b0.bz.assign(2, 0);
        Kernel k = kernel_series(KernelKind::EXP, sh.s(), PsiMode::GR_SIDE, b0, sh, 2);
        for (std::uint32_t attempt = 0; attempt < 5 && rec.pass; ++attempt) {
            Point p = random_point(sh, seed, attempt);
            Rat z = p.value(Var::zgiv());
            if (eval(k.coeffs[2], p) != Rat(1, 2) / (z * z)) {
                rec.pass = false;
                rec.witness = "mismatch at attempt " + std::to_string(attempt);
            }
        }
        rec.elapsed_ms = sw.ms();
        Report rep;
        rep.checks.push_back(std::move(rec));
        return rep;
    });
    checks.push_back([]() {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = "kernel/binom-truncation";
        rec.statement = "binomial kernel with integer exponent N >= 0 vanishes beyond order N";
        for (int rank = 1; rank <= 2 && rec.pass; ++rank)
            for (long N = 0; N <= 3 && rec.pass; ++N) {
                Kernel k = binom_integer_kernel(rank, N, static_cast<int>(N) + 4);
                for (long a = N + 1; a <= N + 4; ++a)
                    if (!k.coeffs[static_cast<std::size_t>(a)].is_const_zero()) {
                        rec.pass = false;
                        rec.witness = "nonzero coefficient at rank " + std::to_string(rank) +
                                      ", N " + std::to_string(N) + ", a " + std::to_string(a);
                    }
            }
        rec.elapsed_ms = sw.ms();
        Report rep;
        rep.checks.push_back(std::move(rec));
        return rep;
    });
    return checks;
}

/// Quiver suite: exhaustive mutation identity over the small rank range plus
/// the superpotential form, rank involution and frozen-edge conservation.
inline std::vector<Check> quiver_suite_checks(const RunConfig& config) {
    std::vector<Check> checks;
    for (int m = 2; m <= config.quiver_m_max; ++m)
        for (int n = 1; n <= m; ++n)
            for (int r = 1; r < m; ++r) {
                checks.push_back([m, n, r]() {
                    detail::Stopwatch sw;
                    CheckRecord rec;
                    rec.id = "quiver/mutation";
                    rec.statement =
                        "mutating the PAX quiver at its gauge node yields the PAXY quiver, "
                        "superpotential tr(P(A-YX)) included";
                    rec.m = m;
                    rec.n = n;
                    rec.r = r;
                    Quiver pax = build_pax(m, n, r);
                    MutationResult res = mutate(pax, 2);
                    Quiver expected = build_paxy(m, n, m - r);
                    rec.pass = res.new_gauge_rank == m - r && quiver_equal(res.quiver, expected);
                    if (!rec.pass) rec.witness = "mutated quiver differs from the dual build";

                    // frozen-edge conservation and the rank involution
                    if (rec.pass) {
                        for (const auto& e : pax.edges)
                            if (e.frozen) {
                                bool same = false;
                                for (const auto& f : res.quiver.edges)
                                    same |= f.id == e.id && f.src == e.src && f.dst == e.dst &&
                                            f.frozen;
                                if (!same) {
                                    rec.pass = false;
                                    rec.witness = "frozen edge not conserved";
                                }
                            }
                    }
                    if (rec.pass) {
                        MutationResult back = mutate(res.quiver, 2);
                        if (back.new_gauge_rank != r) {
                            rec.pass = false;
                            rec.witness = "double mutation does not restore the gauge rank";
                        }
                    }
                    rec.elapsed_ms = sw.ms();
                    Report rep;
                    rep.checks.push_back(std::move(rec));
                    return rep;
                });
            }
    return checks;
}

/// Determinantal suite: the classification list and the square-threefold
/// numerology.
inline std::vector<Check> determinantal_suite_checks(const RunConfig&) {
    std::vector<Check> checks;
    checks.push_back([]() {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = "determinantal/cy-classification";
        rec.statement = "dimension-3 square classification on bounds (8,30) is exactly "
                        "{(4,5,4), (2,4,7), (1,5,19)}";
        auto triples = cy_classify(8, 30);
        std::vector<std::array<int, 3>> expected = {{1, 5, 19}, {2, 4, 7}, {4, 5, 4}};
        rec.pass = triples == expected && cy_classify(12, 60) == expected;
        if (!rec.pass) {
            rec.witness = "got:";
            for (const auto& t : triples)
                rec.witness +=
                    " (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                    std::to_string(t[2]) + ")";
        }
        rec.elapsed_ms = sw.ms();
        Report rep;
        rep.checks.push_back(std::move(rec));
        return rep;
    });
    checks.push_back([]() {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = "determinantal/codim";
        rec.statement = "codim formula and the square-threefold dimension on P^7";
        rec.m = 4;
        rec.n = 4;
        rec.pass = codim(DetConfig(4, 4, 2)) == 4 && dim_proj(DetConfig::proj(4, 4, 2, 7)) == 3;
        bool monotone = true;
        for (int m = 2; m <= 8; ++m)
            for (int n = 1; n <= m; ++n)
                for (int s = 0; s + 1 < n; ++s)
                    monotone &= codim(DetConfig(m, n, s)) > codim(DetConfig(m, n, s + 1));
        rec.pass = rec.pass && monotone;
        rec.elapsed_ms = sw.ms();
        Report rep;
        rep.checks.push_back(std::move(rec));
        return rep;
    });
    checks.push_back([]() {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = "determinantal/scenario-presets";
        rec.statement = "scenario presets produce the documented shapes and pairing sweeps";
        Scenario gn = scenario_gn_threefold();
        rec.pass = gn.shape.m == 4 && gn.shape.n == 4 && gn.shape.r == 2 && gn.betas.size() == 3;
        Scenario amp = scenario_generic(3, 1, 1, true);
        for (const auto& beta : amp.betas) rec.pass = rec.pass && satisfies_ample(beta);
        rec.elapsed_ms = sw.ms();
        Report rep;
        rep.checks.push_back(std::move(rec));
        return rep;
    });
    return checks;
}

// ---- report serialization ------------------------------------------------------

inline nlohmann::json record_to_json(const CheckRecord& rec, bool include_timing) {
    nlohmann::json j;
    j["id"] = rec.id;
    j["statement"] = rec.statement;
    if (rec.m > 0) j["shape"] = {{"m", rec.m}, {"n", rec.n}, {"r", rec.r}};
    if (!rec.bx.empty())
        j["beta"] = {{"bx", rec.bx}, {"bz", rec.bz}, {"ample", rec.ample}};
    if (!rec.degrees.empty()) j["degrees"] = rec.degrees;
    if (!rec.fixed_point.empty()) j["fixed_point"] = rec.fixed_point;
    if (rec.a >= 0) j["a"] = rec.a;
    if (rec.order >= 0) j["order"] = rec.order;
    if (rec.points > 0) j["points"] = rec.points;
    j["pass"] = rec.pass;
    if (!rec.witness.empty()) j["witness"] = rec.witness;
    if (include_timing) j["elapsed_ms"] = rec.elapsed_ms;
    return j;
}

inline nlohmann::json config_to_json(const RunConfig& config, std::uint64_t seed) {
    nlohmann::json j;
    j["suite"] = suite_name(config.suite);
    if (config.exact_shape())
        j["shape"] = {{"m", *config.m}, {"n", *config.n}, {"r", *config.r}};
    j["m_max"] = config.m_max;
    j["quiver_m_max"] = config.quiver_m_max;
    j["beta_source"] = config.beta_source;
    j["max_betas"] = config.max_betas;
    j["degree_vectors"] = config.degree_vectors;
    j["a_max"] = config.a_max;
    j["order"] = config.order;
    j["seed"] = seed;
    j["points"] = config.points;
    j["fail_fast"] = config.fail_fast;
    return j;
}

inline nlohmann::json report_to_json(const Report& report, const RunConfig& config,
                                     std::uint64_t seed) {
    nlohmann::json j;
    j["schema"] = 1;
    j["config"] = config_to_json(config, seed);
    long pass = 0, fail = 0;
    for (const auto& rec : report.checks) (rec.pass ? pass : fail) += 1;
    j["counts"] = {{"pass", pass}, {"fail", fail}};
    j["pass"] = report.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& rec : report.checks) j["checks"].push_back(record_to_json(rec, config.include_timing));
    return j;
}

/// Executes the configured suites; returns 0 when every check passed, 1
/// otherwise. Configuration errors surface as ConfigError (exit code 2 in the
/// command-line driver). The emitted report is canonically ordered, so equal
/// (config, seed) runs produce identical bytes up to the timing fields.
inline int run(const RunConfig& config, std::ostream& out) {
    config.validate();
    std::uint64_t seed = resolve_seed(config);

    std::vector<Check> checks;
    auto add = [&](std::vector<Check> more) {
        for (auto& c : more) checks.push_back(std::move(c));
    };
    switch (config.suite) {
    case Suite::Propositions: add(proposition_suite_checks(config, seed)); break;
    case Suite::Theorems: add(theorem_suite_checks(config, seed)); break;
    case Suite::LemmaForms: add(lemma_suite_checks(config, seed)); break;
    case Suite::Quiver: add(quiver_suite_checks(config)); break;
    case Suite::Determinantal: add(determinantal_suite_checks(config)); break;
    case Suite::All:
        add(lemma_suite_checks(config, seed));
        add(proposition_suite_checks(config, seed));
        add(theorem_suite_checks(config, seed));
        add(quiver_suite_checks(config));
        add(determinantal_suite_checks(config));
        break;
    }

    Report report = run_checks(checks, config.fail_fast);
    std::stable_sort(report.checks.begin(), report.checks.end(),
                     [](const CheckRecord& a, const CheckRecord& b) {
                         return a.sort_key() < b.sort_key();
                     });

    if (config.format == RunConfig::Format::Json) {
        out << report_to_json(report, config, seed).dump(2) << "\n";
    } else {
        for (const auto& rec : report.checks) {
            out << (rec.pass ? "PASS " : "FAIL ") << rec.id;
            if (rec.m > 0) out << " shape=(" << rec.m << "," << rec.n << "," << rec.r << ")";
            if (!rec.bx.empty()) {
                out << " bx=";
                for (std::size_t i = 0; i < rec.bx.size(); ++i) out << (i ? "," : "") << rec.bx[i];
                out << " bz=";
                for (std::size_t i = 0; i < rec.bz.size(); ++i) out << (i ? "," : "") << rec.bz[i];
            }
            if (rec.a >= 0) out << " a=" << rec.a;
            if (!rec.witness.empty()) out << "  [" << rec.witness << "]";
            out << "\n";
        }
        long pass = 0, fail = 0;
        for (const auto& rec : report.checks) (rec.pass ? pass : fail) += 1;
        out << (report.all_pass() ? "OK" : "FAILED") << ": " << pass << " passed, " << fail
            << " failed\n";
    }
    return report.all_pass() ? 0 : 1;
}

} // namespace qd
