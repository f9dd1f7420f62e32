#pragma once

#include "qd/errors.hpp"
#include "qd/expr.hpp"

#include <vector>

namespace qd {

/// Ranks of the two split bundles and of the gauge group, plus the derived
/// dual-side rank s = m - r. Owns the variable registry x_1..x_m, z_1..z_n, z.
struct ModelShape {
    int m = 0; // rank of E
    int n = 0; // rank of F
    int r = 0; // gauge rank on the r-plane side

    ModelShape(int m_, int n_, int r_) : m(m_), n(n_), r(r_) {
        if (!(1 <= n && n <= m)) throw ShapeMismatch("ModelShape: need 1 <= n <= m");
        if (!(1 <= r && r <= m - 1)) throw ShapeMismatch("ModelShape: need 1 <= r <= m-1");
    }

    int s() const { return m - r; }
    int registry_size() const { return m + n + 1; }

    std::vector<Var> registry() const {
        std::vector<Var> out;
        out.reserve(static_cast<std::size_t>(registry_size()));
        for (int i = 1; i <= m; ++i) out.push_back(Var::x(i));
        for (int k = 1; k <= n; ++k) out.push_back(Var::zk(k));
        out.push_back(Var::zgiv());
        return out;
    }

    friend bool operator==(const ModelShape& a, const ModelShape& b) {
        return a.m == b.m && a.n == b.n && a.r == b.r;
    }
};

} // namespace qd
