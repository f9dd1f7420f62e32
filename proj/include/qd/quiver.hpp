#pragma once

#include "qd/errors.hpp"
#include "qd/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qd {

struct QuiverNode {
    enum class Kind { Framed, Gauge };
    int id = 0;
    Kind kind = Kind::Framed;
    std::string label; // meaningful for framed nodes
    int rank = 1;
};

struct QuiverEdge {
    int id = 0;
    int src = 0;
    int dst = 0;
    bool frozen = false; // a fixed section: drawn dashed, exempt from reversal and deletion
    std::string label;
};

struct SuperpotentialTerm {
    Rat coeff;
    std::vector<int> cycle; // edge ids in walk order: cycle[i].dst == cycle[i+1].src
};

/// Framed/gauge directed graph with frozen edges and superpotential cycles.
struct Quiver {
    std::vector<QuiverNode> nodes;
    std::vector<QuiverEdge> edges;
    std::vector<SuperpotentialTerm> superpotential;

    const QuiverNode& node(int id) const {
        for (const auto& n : nodes)
            if (n.id == id) return n;
        throw IndexOutOfRange("Quiver: unknown node id " + std::to_string(id));
    }
    const QuiverEdge& edge(int id) const {
        for (const auto& e : edges)
            if (e.id == id) return e;
        throw IndexOutOfRange("Quiver: unknown edge id " + std::to_string(id));
    }
    bool has_node(int id) const {
        for (const auto& n : nodes)
            if (n.id == id) return true;
        return false;
    }
    int max_edge_id() const {
        int out = -1;
        for (const auto& e : edges) out = std::max(out, e.id);
        return out;
    }

    void validate() const {
        for (const auto& n : nodes)
            if (n.rank < 1) throw RankError("Quiver: node rank must be positive");
        for (const auto& e : edges)
            if (!has_node(e.src) || !has_node(e.dst))
                throw IndexOutOfRange("Quiver: edge endpoint does not exist");
        for (const auto& term : superpotential) {
            if (term.cycle.empty()) throw Error("Quiver: empty superpotential cycle");
            for (std::size_t i = 0; i < term.cycle.size(); ++i) {
                const QuiverEdge& cur = edge(term.cycle[i]);
                const QuiverEdge& nxt = edge(term.cycle[(i + 1) % term.cycle.size()]);
                if (cur.dst != nxt.src)
                    throw Error("Quiver: superpotential cycle is not a closed directed walk");
            }
        }
    }
};

/// PAX-shaped quiver bundle data: gauge(r) -> E, F -> gauge, frozen A: E -> F,
/// superpotential tr(PAX).
inline Quiver build_pax(int m, int n, int r) {
    if (m < 1 || n < 1) throw RankError("build_pax: bundle ranks must be positive");
    if (r < 1 || r > m - 1) throw RankError("build_pax: need 1 <= r <= m-1");
    Quiver q;
    q.nodes = {{0, QuiverNode::Kind::Framed, "E", m},
               {1, QuiverNode::Kind::Framed, "F", n},
               {2, QuiverNode::Kind::Gauge, "", r}};
    q.edges = {{0, 2, 0, false, "X"},  // X: gauge -> E
               {1, 1, 2, false, "P"},  // P: F -> gauge
               {2, 0, 1, true, "A"}};  // A: E -> F, fixed section
    q.superpotential = {{Rat(1), {0, 2, 1}}}; // tr(PAX): X then A then P
    q.validate();
    return q;
}

/// PAXY-shaped quiver bundle data: E -> gauge(s) -> F, P: F -> E, frozen A,
/// superpotential tr(P(A - YX)).
inline Quiver build_paxy(int m, int n, int s) {
    if (m < 1 || n < 1) throw RankError("build_paxy: bundle ranks must be positive");
    if (s < 1 || s > m - 1) throw RankError("build_paxy: need 1 <= s <= m-1");
    Quiver q;
    q.nodes = {{0, QuiverNode::Kind::Framed, "E", m},
               {1, QuiverNode::Kind::Framed, "F", n},
               {2, QuiverNode::Kind::Gauge, "", s}};
    q.edges = {{0, 0, 2, false, "X"},  // X: E -> gauge
               {1, 2, 1, false, "Y"},  // Y: gauge -> F
               {2, 1, 0, false, "P"},  // P: F -> E
               {3, 0, 1, true, "A"}};
    q.superpotential = {{Rat(1), {3, 2}},      // tr(PA): A then P
                        {Rat(-1), {0, 1, 2}}}; // -tr(PYX): X then Y then P
    q.validate();
    return q;
}

/// All simple directed cycles (distinct vertices) of length <= max_len, up to
/// rotation, frozen edges included. Each cycle is an edge-id walk rotated so
/// that it starts with its smallest edge id.
inline std::vector<std::vector<int>> cycles(const Quiver& q, int max_len) {
    if (max_len < 2) throw Error("cycles: max_len must be at least 2");
    std::vector<std::vector<int>> out;
    std::set<std::vector<int>> seen;

    std::vector<int> node_ids;
    for (const auto& n : q.nodes) node_ids.push_back(n.id);
    std::sort(node_ids.begin(), node_ids.end());

    // DFS from each start node; only record cycles whose smallest visited node
    // is the start, so every cycle is found exactly once per edge sequence.
    struct Dfs {
        const Quiver& q;
        int start;
        int max_len;
        std::set<std::vector<int>>& seen;
        std::vector<std::vector<int>>& out;
        std::vector<int> path_edges;
        std::set<int> visited;

        void run(int at) {
            for (const auto& e : q.edges) {
                if (e.src != at) continue;
                if (e.dst == start) {
                    if (static_cast<int>(path_edges.size()) + 1 < 2) continue;
                    if (static_cast<int>(path_edges.size()) + 1 > max_len) continue;
                    std::vector<int> cyc = path_edges;
                    cyc.push_back(e.id);
                    auto rot = canonical_rotation(cyc);
                    if (seen.insert(rot).second) out.push_back(rot);
                    continue;
                }
                if (e.dst < start || visited.count(e.dst)) continue;
                if (static_cast<int>(path_edges.size()) + 1 >= max_len) continue;
                visited.insert(e.dst);
                path_edges.push_back(e.id);
                run(e.dst);
                path_edges.pop_back();
                visited.erase(e.dst);
            }
        }

        static std::vector<int> canonical_rotation(const std::vector<int>& cyc) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < cyc.size(); ++i)
                if (cyc[i] < cyc[best]) best = i;
            std::vector<int> rot;
            for (std::size_t i = 0; i < cyc.size(); ++i)
                rot.push_back(cyc[(best + i) % cyc.size()]);
            return rot;
        }
    };

    for (int start : node_ids) {
        Dfs dfs{q, start, max_len, seen, out, {}, {}};
        dfs.run(start);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct MutationResult {
    Quiver quiver;
    int new_gauge_rank = 0;
    std::vector<int> added_edges;    // surviving composite edge ids
    std::vector<int> reversed_edges; // ids of arrows reversed at the node
    std::vector<std::pair<int, int>> deleted_pairs;
    std::vector<std::vector<int>> added_cycles; // new superpotential cycles
    std::vector<std::string> warnings;          // superpotential terms that died
};

/// Mutation at a gauge node: composite arrows for paths through the node,
/// reversal of its non-frozen arrows, the rank rule
/// N = max(N_in, N_out) - rank, deletion of newly created non-frozen
/// 2-cycles, and superpotential bookkeeping. Frozen edges take part in path
/// formation and the rank counts but are never reversed or deleted; a new
/// 2-cycle through a frozen edge therefore survives and enters the
/// superpotential with coefficient +1, while every other new cycle (length
/// > 2) enters with coefficient -1. Old superpotential terms that lose an
/// edge or an orientation die with a warning.
inline MutationResult mutate(const Quiver& input, int gauge_id) {
    input.validate();
    const QuiverNode& gauge = input.node(gauge_id);
    if (gauge.kind != QuiverNode::Kind::Gauge)
        throw NotGaugeNode("mutate: node " + std::to_string(gauge_id) + " is not a gauge node");
    for (const auto& e : input.edges)
        if (e.src == gauge_id && e.dst == gauge_id)
            throw Error("mutate: loops at the gauge node are not supported");

    MutationResult result;
    Quiver& q = result.quiver;
    q.nodes = input.nodes;

    std::vector<QuiverEdge> in_edges, out_edges;
    for (const auto& e : input.edges) {
        if (e.dst == gauge_id) in_edges.push_back(e);
        if (e.src == gauge_id) out_edges.push_back(e);
    }

    // rank rule, weighting each arrow by the rank of its far endpoint
    long n_in = 0, n_out = 0;
    for (const auto& e : in_edges) n_in += input.node(e.src).rank;
    for (const auto& e : out_edges) n_out += input.node(e.dst).rank;
    long new_rank = std::max(n_in, n_out) - gauge.rank;
    if (new_rank < 1) throw RankError("mutate: rank rule yields a nonpositive gauge rank");
    result.new_gauge_rank = static_cast<int>(new_rank);
    for (auto& n : q.nodes)
        if (n.id == gauge_id) n.rank = static_cast<int>(new_rank);

    // step 1: composites for every path through the node, then reversal
    std::set<int> reversed_ids, composite_ids;
    int next_id = input.max_edge_id() + 1;
    for (const auto& e : input.edges) {
        QuiverEdge copy = e;
        if (!e.frozen && (e.dst == gauge_id || e.src == gauge_id)) {
            std::swap(copy.src, copy.dst);
            reversed_ids.insert(e.id);
            result.reversed_edges.push_back(e.id);
        }
        q.edges.push_back(copy);
    }
    for (const auto& ein : in_edges)
        for (const auto& eout : out_edges) {
            QuiverEdge comp;
            comp.id = next_id++;
            comp.src = ein.src;
            comp.dst = eout.dst;
            comp.frozen = false;
            comp.label = "(" + eout.label + "." + ein.label + ")";
            composite_ids.insert(comp.id);
            q.edges.push_back(comp);
        }

    // step 3: delete newly created non-frozen 2-cycles, both edges each
    auto is_new = [&](int id) { return reversed_ids.count(id) || composite_ids.count(id); };
    bool again = true;
    while (again) {
        again = false;
        for (std::size_t i = 0; i < q.edges.size() && !again; ++i)
            for (std::size_t j = 0; j < q.edges.size() && !again; ++j) {
                const QuiverEdge& a = q.edges[i];
                const QuiverEdge& b = q.edges[j];
                if (i == j || a.frozen || b.frozen) continue;
                if (a.src != b.dst || a.dst != b.src) continue;
                if (!is_new(a.id) && !is_new(b.id)) continue;
                result.deleted_pairs.emplace_back(std::min(a.id, b.id), std::max(a.id, b.id));
                std::size_t hi = std::max(i, j), lo = std::min(i, j);
                q.edges.erase(q.edges.begin() + static_cast<long>(hi));
                q.edges.erase(q.edges.begin() + static_cast<long>(lo));
                again = true;
            }
    }
    for (int id : composite_ids)
        if (std::any_of(q.edges.begin(), q.edges.end(),
                        [&](const QuiverEdge& e) { return e.id == id; }))
            result.added_edges.push_back(id);

    // step 4: superpotential bookkeeping. Old terms survive iff their walk is
    // untouched; new cycles are those using a composite or reversed edge.
    for (const auto& term : input.superpotential) {
        bool alive = true;
        for (int id : term.cycle) {
            bool exists = std::any_of(q.edges.begin(), q.edges.end(),
                                      [&](const QuiverEdge& e) { return e.id == id; });
            if (!exists || reversed_ids.count(id)) alive = false;
        }
        if (alive) {
            q.superpotential.push_back(term);
        } else {
            std::ostringstream os;
            os << "superpotential cycle (";
            for (std::size_t i = 0; i < term.cycle.size(); ++i)
                os << (i ? "," : "") << term.cycle[i];
            os << ") died in the mutation";
            result.warnings.push_back(os.str());
        }
    }
    int node_count = static_cast<int>(q.nodes.size());
    for (const auto& cyc : cycles(q, std::max(2, node_count))) {
        bool is_new_cycle = false, has_frozen = false;
        for (int id : cyc) {
            if (is_new(id)) is_new_cycle = true;
            if (q.edge(id).frozen) has_frozen = true;
        }
        if (!is_new_cycle) continue;
        if (cyc.size() == 2 && has_frozen) {
            q.superpotential.push_back({Rat(1), cyc});
            result.added_cycles.push_back(cyc);
        } else if (cyc.size() > 2) {
            q.superpotential.push_back({Rat(-1), cyc});
            result.added_cycles.push_back(cyc);
        }
    }

    q.validate();
    return result;
}

namespace detail {

using NodeWalk = std::vector<std::tuple<int, int, bool>>; // (src, dst, frozen) after relabelling

inline NodeWalk canonical_walk(const Quiver& q, const std::vector<int>& cycle,
                               const std::map<int, int>& node_map) {
    NodeWalk walk;
    for (int id : cycle) {
        const QuiverEdge& e = q.edge(id);
        walk.emplace_back(node_map.at(e.src), node_map.at(e.dst), e.frozen);
    }
    NodeWalk best = walk;
    for (std::size_t shift = 1; shift < walk.size(); ++shift) {
        NodeWalk rot;
        for (std::size_t i = 0; i < walk.size(); ++i) rot.push_back(walk[(i + shift) % walk.size()]);
        if (rot < best) best = rot;
    }
    return best;
}

inline std::multiset<std::tuple<int, int, bool>> edge_multiset(const Quiver& q,
                                                               const std::map<int, int>& node_map) {
    std::multiset<std::tuple<int, int, bool>> out;
    for (const auto& e : q.edges) out.insert({node_map.at(e.src), node_map.at(e.dst), e.frozen});
    return out;
}

inline std::multiset<std::pair<std::string, NodeWalk>>
superpotential_multiset(const Quiver& q, const std::map<int, int>& node_map) {
    std::multiset<std::pair<std::string, NodeWalk>> out;
    for (const auto& term : q.superpotential)
        out.insert({term.coeff.str(), canonical_walk(q, term.cycle, node_map)});
    return out;
}

} // namespace detail

/// Structural equality: a node bijection preserving kind, rank and framed
/// labels under which the edge multisets (with frozen flags) and the
/// superpotentials (coefficients, cycles up to rotation) coincide. The search
/// is exhaustive over label- and rank-compatible bijections.
inline bool quiver_equal(const Quiver& a, const Quiver& b) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size() ||
        a.superpotential.size() != b.superpotential.size())
        return false;

    std::vector<int> a_ids, b_ids;
    for (const auto& n : a.nodes) a_ids.push_back(n.id);
    for (const auto& n : b.nodes) b_ids.push_back(n.id);
    std::sort(a_ids.begin(), a_ids.end());
    std::sort(b_ids.begin(), b_ids.end());

    std::vector<int> perm = b_ids;
    do {
        bool compatible = true;
        std::map<int, int> a_map, b_map; // node id -> common label
        for (std::size_t i = 0; i < a_ids.size() && compatible; ++i) {
            const QuiverNode& na = a.node(a_ids[i]);
            const QuiverNode& nb = b.node(perm[i]);
            if (na.kind != nb.kind || na.rank != nb.rank) compatible = false;
            if (na.kind == QuiverNode::Kind::Framed && na.label != nb.label) compatible = false;
            a_map[na.id] = static_cast<int>(i);
            b_map[nb.id] = static_cast<int>(i);
        }
        if (!compatible) continue;
        if (detail::edge_multiset(a, a_map) != detail::edge_multiset(b, b_map)) continue;
        if (detail::superpotential_multiset(a, a_map) != detail::superpotential_multiset(b, b_map))
            continue;
        return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// ---- JSON and DOT interchange ------------------------------------------------

inline nlohmann::json to_json(const Quiver& q) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : q.nodes) {
        nlohmann::json nj;
        nj["id"] = n.id;
        nj["kind"] = n.kind == QuiverNode::Kind::Framed ? "framed" : "gauge";
        nj["rank"] = n.rank;
        if (n.kind == QuiverNode::Kind::Framed) nj["label"] = n.label;
        j["nodes"].push_back(nj);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : q.edges) {
        nlohmann::json ej;
        ej["id"] = e.id;
        ej["src"] = e.src;
        ej["dst"] = e.dst;
        ej["frozen"] = e.frozen;
        ej["label"] = e.label;
        j["edges"].push_back(ej);
    }
    j["superpotential"] = nlohmann::json::array();
    for (const auto& t : q.superpotential) {
        nlohmann::json tj;
        tj["coeff"] = t.coeff.str();
        tj["cycle"] = t.cycle;
        j["superpotential"].push_back(tj);
    }
    return j;
}

inline Quiver quiver_from_json(const nlohmann::json& j) {
    Quiver q;
    try {
        for (const auto& nj : j.at("nodes")) {
            QuiverNode n;
            n.id = nj.at("id").get<int>();
            std::string kind = nj.at("kind").get<std::string>();
            if (kind == "framed")
                n.kind = QuiverNode::Kind::Framed;
            else if (kind == "gauge")
                n.kind = QuiverNode::Kind::Gauge;
            else
                throw ConfigError("quiver: unknown node kind '" + kind + "'");
            n.rank = nj.at("rank").get<int>();
            n.label = nj.value("label", std::string{});
            q.nodes.push_back(n);
        }
        for (const auto& ej : j.at("edges")) {
            QuiverEdge e;
            e.id = ej.at("id").get<int>();
            e.src = ej.at("src").get<int>();
            e.dst = ej.at("dst").get<int>();
            e.frozen = ej.value("frozen", false);
            e.label = ej.value("label", std::string{});
            q.edges.push_back(e);
        }
        for (const auto& tj : j.value("superpotential", nlohmann::json::array())) {
            SuperpotentialTerm t;
            t.coeff = Rat(tj.at("coeff").get<std::string>());
            t.cycle = tj.at("cycle").get<std::vector<int>>();
            q.superpotential.push_back(t);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("quiver: malformed JSON: ") + e.what());
    }
    q.validate();
    return q;
}

inline std::string to_dot(const Quiver& q) {
    std::ostringstream os;
    os << "digraph quiver {\n";
    for (const auto& n : q.nodes) {
        if (n.kind == QuiverNode::Kind::Framed)
            os << "  n" << n.id << " [shape=box, label=\"" << n.label << " (" << n.rank << ")\"];\n";
        else
            os << "  n" << n.id << " [shape=circle, label=\"" << n.rank << "\"];\n";
    }
    for (const auto& e : q.edges) {
        os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << e.label << "\"";
        if (e.frozen) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace qd
