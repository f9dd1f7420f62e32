#pragma once

#include "qd/expr.hpp"
#include "qd/localization.hpp"

#include <vector>

namespace qd {

/// The one audited reduction of the infinite-product notation. For the affine
/// factor f(h) = base + h*step this returns
///
///     prod_{h<=0} f(h) / prod_{h<=c} f(h)
///       = 1 / prod_{h=1}^{c} f(h)      for c >= 0   (empty product when c == 0)
///       = prod_{h=c+1}^{0} f(h)        for c < 0.
///
/// Every displayed modification factor is assembled from this primitive and
/// its reciprocal form below; no other code touches the h-ranges.
inline Expr poch_ratio(const Expr& base, const Expr& step, long c) {
    if (c >= 0) {
        std::vector<Expr> factors;
        factors.reserve(static_cast<std::size_t>(c));
        for (long h = 1; h <= c; ++h)
            factors.push_back(base + Expr::from_int(h) * step);
        if (factors.empty()) return Expr::from_int(1);
        return Expr::quotient(Expr::from_int(1), Expr::product(std::move(factors)));
    }
    std::vector<Expr> factors;
    factors.reserve(static_cast<std::size_t>(-c));
    for (long h = c + 1; h <= 0; ++h)
        factors.push_back(base + Expr::from_int(h) * step);
    return Expr::product(std::move(factors));
}

/// prod_{h<=c} f(h) / prod_{h<=0} f(h), the reciprocal orientation.
inline Expr poch_ratio_inv(const Expr& base, const Expr& step, long c) {
    if (c >= 0) {
        std::vector<Expr> factors;
        factors.reserve(static_cast<std::size_t>(c));
        for (long h = 1; h <= c; ++h)
            factors.push_back(base + Expr::from_int(h) * step);
        if (factors.empty()) return Expr::from_int(1);
        return Expr::product(std::move(factors));
    }
    std::vector<Expr> factors;
    factors.reserve(static_cast<std::size_t>(-c));
    for (long h = c + 1; h <= 0; ++h)
        factors.push_back(base + Expr::from_int(h) * step);
    return Expr::quotient(Expr::from_int(1), Expr::product(std::move(factors)));
}

/// All integer vectors of the given length summing to total with every entry
/// >= lower_bound, in lexicographic order; empty when total < parts*lower_bound.
inline std::vector<DegreeVector> compositions(long total, int parts, long lower_bound) {
    std::vector<DegreeVector> out;
    if (parts < 1) return out;
    DegreeVector cur(static_cast<std::size_t>(parts), 0);
    struct Rec {
        long lb;
        int parts;
        std::vector<DegreeVector>& out;
        DegreeVector& cur;
        void go(int pos, long remaining) {
            if (pos == parts - 1) {
                if (remaining >= lb) {
                    cur[static_cast<std::size_t>(pos)] = remaining;
                    out.push_back(cur);
                }
                return;
            }
            long hi = remaining - lb * (parts - 1 - pos);
            for (long v = lb; v <= hi; ++v) {
                cur[static_cast<std::size_t>(pos)] = v;
                go(pos + 1, remaining - v);
            }
        }
    } rec{lower_bound, parts, out, cur};
    rec.go(0, total);
    return out;
}

} // namespace qd
