#pragma once

#include "qd/errors.hpp"
#include "qd/localization.hpp"
#include "qd/shape.hpp"

#include <array>
#include <string>
#include <vector>

namespace qd {

/// Numerology of a rank-drop locus of an m x n bundle map over a base; the
/// projective preset uses E trivial of rank m and F = O(1)^n on P^N.
struct DetConfig {
    enum class BaseKind { Formal, Proj };
    int m = 0;
    int n = 0;
    int s = 0;
    BaseKind base = BaseKind::Formal;
    int proj_dim = 0; // N for BaseKind::Proj

    DetConfig(int m_, int n_, int s_) : m(m_), n(n_), s(s_) {
        if (!(0 <= s && s <= n && n <= m)) throw ShapeMismatch("DetConfig: need 0 <= s <= n <= m");
    }
    static DetConfig proj(int m, int n, int s, int N) {
        DetConfig cfg(m, n, s);
        cfg.base = BaseKind::Proj;
        cfg.proj_dim = N;
        return cfg;
    }
};

/// codim of the rank <= s locus: (n - s)(m - s).
inline long codim(const DetConfig& cfg) {
    return static_cast<long>(cfg.n - cfg.s) * static_cast<long>(cfg.m - cfg.s);
}

/// dim of the locus for the projective preset: N - (m - s)^2 (square case).
inline long dim_proj(const DetConfig& cfg) {
    if (cfg.base != DetConfig::BaseKind::Proj)
        throw ShapeMismatch("dim_proj: config has no projective base");
    return cfg.proj_dim - static_cast<long>(cfg.m - cfg.s) * (cfg.m - cfg.s);
}

/// Exhaustive search for square-case loci on P^N with trivial E and F = O(1)^n
/// that are Calabi-Yau (N + 1 - (m-s)m = 0) of the requested dimension
/// (N - (m-s)^2 == dim). Returns (s, m, N) triples in lexicographic order.
inline std::vector<std::array<int, 3>> cy_classify(int max_m, int max_N, int dim = 3) {
    if (max_m < 1 || max_N < 1) throw ConfigError("cy_classify: bounds must be positive");
    std::vector<std::array<int, 3>> out;
    for (int m = 1; m <= max_m; ++m)
        for (int s = 0; s < m; ++s)
            for (int N = 1; N <= max_N; ++N)
                if (N + 1 - (m - s) * m == 0 && N - (m - s) * (m - s) == dim)
                    out.push_back({s, m, N});
    std::sort(out.begin(), out.end());
    return out;
}

/// A shape together with the curve-class sweep to verify it against.
struct Scenario {
    std::string name;
    ModelShape shape;
    std::vector<BetaClass> betas;
};

/// The square m = n = 4, s = 2 threefold on P^7: E trivial, F = O(1)^4, so
/// beta.x_i = 0 and beta.z_k = -d for the degree-d line class.
inline Scenario scenario_gn_threefold() {
    Scenario sc{"gn-3fold", ModelShape(4, 4, 2), {}};
    for (long d = 0; d <= 2; ++d) {
        BetaClass beta;
        beta.bx.assign(4, 0);
        beta.bz.assign(4, -d);
        beta.ample = satisfies_ample(beta);
        sc.betas.push_back(beta);
    }
    return sc;
}

/// Deterministic sweep of all pairing vectors with entries in [-2, 2],
/// optionally restricted to the positivity constraint beta.x_i >= beta.z_k.
inline Scenario scenario_generic(int m, int n, int r, bool ample_only) {
    Scenario sc{ample_only ? "generic-ample" : "generic", ModelShape(m, n, r), {}};
    std::vector<long> entries(static_cast<std::size_t>(m + n), -2);
    while (true) {
        BetaClass beta;
        beta.bx.assign(entries.begin(), entries.begin() + m);
        beta.bz.assign(entries.begin() + m, entries.end());
        beta.ample = satisfies_ample(beta);
        if (!ample_only || beta.ample) sc.betas.push_back(beta);
        std::size_t i = 0;
        while (i < entries.size() && entries[i] == 2) entries[i++] = -2;
        if (i == entries.size()) break;
        ++entries[i];
    }
    return sc;
}

/// Named presets for the batch driver.
inline Scenario scenario_preset(const std::string& name, int m = 0, int n = 0, int r = 0,
                                bool ample_only = false) {
    if (name == "gn-3fold") return scenario_gn_threefold();
    if (name == "generic") return scenario_generic(m, n, r, ample_only);
    throw UnknownScenario("scenario_preset: unknown scenario '" + name + "'");
}

} // namespace qd
