// Batch driver: verification suites, quiver mutation, classification and
// export utilities. Exit codes: 0 all checks passed, 1 a check failed,
// 2 configuration error.

#include <CLI11.hpp>

#include "qd/runner.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw qd::ConfigError("cannot open output file '" + path + "'");
    return file;
}

qd::Quiver load_quiver(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qd::ConfigError("cannot open input file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw qd::ConfigError(std::string("cannot parse quiver JSON: ") + e.what());
    }
    return qd::quiver_from_json(j);
}

int resolve_node(const qd::Quiver& q, const std::string& spec) {
    if (spec == "gauge") {
        int found = -1;
        for (const auto& n : q.nodes)
            if (n.kind == qd::QuiverNode::Kind::Gauge) {
                if (found >= 0) throw qd::ConfigError("--node gauge is ambiguous: several gauge nodes");
                found = n.id;
            }
        if (found < 0) throw qd::ConfigError("quiver has no gauge node");
        return found;
    }
    try {
        return std::stoi(spec);
    } catch (const std::exception&) {
        throw qd::ConfigError("--node expects an id or 'gauge'");
    }
}

int framed_rank(const qd::Quiver& q, const std::string& label) {
    for (const auto& n : q.nodes)
        if (n.kind == qd::QuiverNode::Kind::Framed && n.label == label) return n.rank;
    throw qd::ConfigError("quiver has no framed node labelled '" + label + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of the duality identities between the modification factors "
                 "of dual Grassmannian-bundle and PAX/PAXY determinantal-resolution series, with "
                 "the quiver-mutation combinatorics that relates the two models"};
    app.require_subcommand(1);

    // ---- verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run verification suites and emit a report");
    verify->set_config("--config", "", "declarative config file (ini: key=value, [verify] section)");
    std::string suite = "all";
    verify->add_option("--suite", suite, "propositions|theorems|lemma-forms|quiver|determinantal|all");
    int vm = 0, vn = 0, vr = 0;
    auto* om = verify->add_option("--m", vm, "exact shape: rank of E");
    auto* on = verify->add_option("--n", vn, "exact shape: rank of F");
    auto* orr = verify->add_option("--r", vr, "exact shape: gauge rank");
    qd::RunConfig config;
    verify->add_option("--m-max", config.m_max, "shape grid bound for the series suites");
    verify->add_option("--quiver-m-max", config.quiver_m_max, "rank bound for the quiver suite");
    verify->add_option("--beta", config.beta_source, "pairing source: sweep|gn-3fold");
    verify->add_option("--max-betas", config.max_betas, "pairing vectors per shape and regime");
    verify->add_option("--degree-vectors", config.degree_vectors, "degree vectors per pairing");
    verify->add_option("--a-max", config.a_max, "largest collapsed index checked");
    verify->add_option("--order", config.order, "q1 truncation order for the series checks");
    verify->add_option("--seed", config.seed, "sampling seed (QD_SEED overrides)");
    verify->add_option("--points", config.points, "pole-free sample points per identity");
    std::string format = "json";
    verify->add_option("--format", format, "report format: json|text");
    verify->add_flag("--fail-fast", config.fail_fast, "stop after the first failing check");
    bool omit_timing = false;
    verify->add_flag("--omit-timing", omit_timing, "leave elapsed-ms fields out of the report");
    std::string verify_out;
    verify->add_option("--out", verify_out, "write the report to a file instead of stdout");

    // ---- mutate ---------------------------------------------------------------
    auto* mut = app.add_subcommand("mutate", "mutate a quiver at a gauge node");
    std::string mut_input, mut_node = "gauge", mut_out;
    mut->add_option("--input", mut_input, "quiver JSON file")->required();
    mut->add_option("--node", mut_node, "gauge node id, or 'gauge' for the unique gauge node");
    mut->add_option("--out", mut_out, "write the mutated quiver JSON to a file");
    bool check_paxy = false;
    mut->add_flag("--check-paxy", check_paxy,
                  "verify the result is the PAXY-shaped quiver for the input's E, F ranks "
                  "(exit 1 when it is not)");

    // ---- classify-cy ----------------------------------------------------------
    auto* cls = app.add_subcommand("classify-cy",
                                   "classify square Calabi-Yau rank-drop loci on projective space");
    int max_m = 8, max_N = 30, cls_dim = 3;
    cls->add_option("--max-m", max_m, "bound on the bundle rank m");
    cls->add_option("--max-n", max_N, "bound on the projective dimension N");
    cls->add_option("--dim", cls_dim, "dimension of the locus");
    std::string cls_format = "text", cls_out;
    cls->add_option("--format", cls_format, "text|json");
    cls->add_option("--out", cls_out, "output file");

    // ---- scenario --------------------------------------------------------------
    auto* scn = app.add_subcommand("scenario", "emit a named scenario preset as JSON");
    std::string scn_name = "gn-3fold", scn_out;
    int sm = 3, sn = 1, sr = 1;
    bool scn_ample = false;
    scn->add_option("--name", scn_name, "gn-3fold|generic");
    scn->add_option("--m", sm, "rank of E (generic scenario)");
    scn->add_option("--n", sn, "rank of F (generic scenario)");
    scn->add_option("--r", sr, "gauge rank (generic scenario)");
    scn->add_flag("--ample", scn_ample, "restrict the sweep to the positivity constraint");
    scn->add_option("--out", scn_out, "output file");

    // ---- export-dot ------------------------------------------------------------
    auto* dot = app.add_subcommand("export-dot", "render a quiver in Graphviz DOT format");
    std::string dot_input, dot_build, dot_out;
    int dm = 0, dn = 0, drank = 0;
    dot->add_option("--input", dot_input, "quiver JSON file");
    dot->add_option("--build", dot_build, "build instead of reading: pax|paxy");
    dot->add_option("--m", dm, "rank of E for --build");
    dot->add_option("--n", dn, "rank of F for --build");
    dot->add_option("--rank", drank, "gauge rank for --build");
    dot->add_option("--out", dot_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            config.suite = qd::suite_from_string(suite);
            if (*om || *on || *orr) {
                if (!(*om && *on && *orr))
                    throw qd::ConfigError("--m, --n, --r must be given together");
                config.m = vm;
                config.n = vn;
                config.r = vr;
            }
            if (format == "json")
                config.format = qd::RunConfig::Format::Json;
            else if (format == "text")
                config.format = qd::RunConfig::Format::Text;
            else
                throw qd::ConfigError("--format must be json or text");
            config.include_timing = !omit_timing;
            std::ofstream file;
            return qd::run(config, open_out(file, verify_out));
        }

        if (*mut) {
            qd::Quiver q = load_quiver(mut_input);
            qd::MutationResult res = qd::mutate(q, resolve_node(q, mut_node));
            std::ofstream file;
            std::ostream& os = open_out(file, mut_out);
            os << qd::to_json(res.quiver).dump(2) << "\n";
            for (const auto& w : res.warnings) std::cerr << "note: " << w << "\n";
            if (check_paxy) {
                int m = framed_rank(q, "E");
                int n = framed_rank(q, "F");
                qd::Quiver expected = qd::build_paxy(m, n, res.new_gauge_rank);
                if (!qd::quiver_equal(res.quiver, expected)) {
                    std::cerr << "check failed: mutated quiver is not the PAXY quiver for (m=" << m
                              << ", n=" << n << ", s=" << res.new_gauge_rank << ")\n";
                    return 1;
                }
            }
            return 0;
        }

        if (*cls) {
            auto triples = qd::cy_classify(max_m, max_N, cls_dim);
            std::ofstream file;
            std::ostream& os = open_out(file, cls_out);
            if (cls_format == "json") {
                nlohmann::json j;
                j["schema"] = 1;
                j["triples"] = nlohmann::json::array();
                for (const auto& t : triples) j["triples"].push_back({t[0], t[1], t[2]});
                os << j.dump(2) << "\n";
            } else if (cls_format == "text") {
                for (const auto& t : triples)
                    os << "(s, m, N) = (" << t[0] << ", " << t[1] << ", " << t[2] << ")\n";
            } else {
                throw qd::ConfigError("--format must be json or text");
            }
            return 0;
        }

        if (*scn) {
            qd::Scenario sc = qd::scenario_preset(scn_name, sm, sn, sr, scn_ample);
            nlohmann::json j;
            j["schema"] = 1;
            j["name"] = sc.name;
            j["shape"] = {{"m", sc.shape.m}, {"n", sc.shape.n}, {"r", sc.shape.r}};
            j["betas"] = nlohmann::json::array();
            for (const auto& beta : sc.betas)
                j["betas"].push_back({{"bx", beta.bx}, {"bz", beta.bz}, {"ample", beta.ample}});
            std::ofstream file;
            open_out(file, scn_out) << j.dump(2) << "\n";
            return 0;
        }

        if (*dot) {
            qd::Quiver q;
            if (!dot_input.empty()) {
                q = load_quiver(dot_input);
            } else if (dot_build == "pax") {
                q = qd::build_pax(dm, dn, drank);
            } else if (dot_build == "paxy") {
                q = qd::build_paxy(dm, dn, drank);
            } else {
                throw qd::ConfigError("export-dot needs --input or --build pax|paxy with ranks");
            }
            std::ofstream file;
            open_out(file, dot_out) << qd::to_dot(q);
            return 0;
        }
    } catch (const qd::EvaluationExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
