#pragma once

#include "qd/errors.hpp"
#include "qd/expr.hpp"
#include "qd/shape.hpp"

#include <algorithm>
#include <vector>

namespace qd {

/// Which Grassmannian bundle a fixed point lives on: the r-plane side
/// (tautological roots y_k) or the dual s-plane side (roots w_k).
enum class Side { Primal, Dual };

/// A torus-fixed component, recorded as the strictly increasing index subset
/// of [m] selecting the split summands of E.
struct FixedPoint {
    Side side = Side::Primal;
    std::vector<int> indices; // strictly increasing, values in 1..m

    static FixedPoint standard(const ModelShape& shape, Side side) {
        FixedPoint fp;
        fp.side = side;
        int k = side == Side::Primal ? shape.r : shape.s();
        int start = side == Side::Primal ? 1 : shape.r + 1;
        for (int i = 0; i < k; ++i) fp.indices.push_back(start + i);
        return fp;
    }

    friend bool operator==(const FixedPoint& a, const FixedPoint& b) {
        return a.side == b.side && a.indices == b.indices;
    }
};

inline int side_rank(Side side, const ModelShape& shape) {
    return side == Side::Primal ? shape.r : shape.s();
}

inline void validate_fixed_point(const FixedPoint& fp, const ModelShape& shape) {
    if (static_cast<int>(fp.indices.size()) != side_rank(fp.side, shape))
        throw ShapeMismatch("FixedPoint: subset size does not match the side's gauge rank");
    int prev = 0;
    for (int i : fp.indices) {
        if (i <= prev || i > shape.m)
            throw ShapeMismatch("FixedPoint: indices must be strictly increasing in 1..m");
        prev = i;
    }
}

/// Complementary fixed point on the opposite side.
inline FixedPoint complement(const FixedPoint& fp, const ModelShape& shape) {
    validate_fixed_point(fp, shape);
    FixedPoint out;
    out.side = fp.side == Side::Primal ? Side::Dual : Side::Primal;
    std::size_t pos = 0;
    for (int i = 1; i <= shape.m; ++i) {
        if (pos < fp.indices.size() && fp.indices[pos] == i) {
            ++pos;
        } else {
            out.indices.push_back(i);
        }
    }
    return out;
}

/// Restriction of the tautological Chern root y_k on the r-plane side: x_{i_k}.
inline Var restrict_y(const FixedPoint& fp, int k) {
    if (fp.side != Side::Primal) throw ShapeMismatch("restrict_y: expected an r-plane side fixed point");
    if (k < 1 || k > static_cast<int>(fp.indices.size()))
        throw IndexOutOfRange("restrict_y: k out of range");
    return Var::x(fp.indices[static_cast<std::size_t>(k) - 1]);
}

/// Restriction of the dual-side root w_k: the two-node expression -x_{j_k}.
inline Expr restrict_w(const FixedPoint& fp, int k) {
    if (fp.side != Side::Dual) throw ShapeMismatch("restrict_w: expected an s-plane side fixed point");
    if (k < 1 || k > static_cast<int>(fp.indices.size()))
        throw IndexOutOfRange("restrict_w: k out of range");
    return -Expr::variable(Var::x(fp.indices[static_cast<std::size_t>(k) - 1]));
}

/// The permutation of [m] carrying fp onto the standard fixed point:
/// on the primal side it sends the subset onto {1..r} and the complement onto
/// {r+1..m}, both order-preservingly; on the dual side the subset goes to
/// {r+1..m}. Returned as images: sigma[i-1] is the image of i.
inline std::vector<int> permute_to_standard(const FixedPoint& fp, const ModelShape& shape) {
    validate_fixed_point(fp, shape);
    const FixedPoint primal = fp.side == Side::Primal ? fp : complement(fp, shape);
    std::vector<int> sigma(static_cast<std::size_t>(shape.m), 0);
    int next_low = 1, next_high = shape.r + 1;
    std::size_t pos = 0;
    for (int i = 1; i <= shape.m; ++i) {
        if (pos < primal.indices.size() && primal.indices[pos] == i) {
            sigma[static_cast<std::size_t>(i) - 1] = next_low++;
            ++pos;
        } else {
            sigma[static_cast<std::size_t>(i) - 1] = next_high++;
        }
    }
    return sigma;
}

inline std::vector<int> invert_permutation(const std::vector<int>& sigma) {
    std::vector<int> inv(sigma.size(), 0);
    for (std::size_t i = 0; i < sigma.size(); ++i)
        inv[static_cast<std::size_t>(sigma[i]) - 1] = static_cast<int>(i) + 1;
    return inv;
}

/// All size-k index subsets of [m] for the given side, in lexicographic order.
inline std::vector<FixedPoint> enumerate_fixed_points(const ModelShape& shape, Side side) {
    int k = side_rank(side, shape);
    std::vector<FixedPoint> out;
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        FixedPoint fp;
        fp.side = side;
        fp.indices = pick;
        out.push_back(fp);
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == shape.m - (k - 1 - i)) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j) - 1] + 1;
    }
    return out;
}

/// Integer pairing data of a curve class: bx[i-1] = beta.x_i, bz[k-1] = beta.z_k.
struct BetaClass {
    std::vector<long> bx;
    std::vector<long> bz;
    bool ample = false;

    friend bool operator==(const BetaClass& a, const BetaClass& b) {
        return a.bx == b.bx && a.bz == b.bz && a.ample == b.ample;
    }
};

inline void validate_beta(const BetaClass& beta, const ModelShape& shape) {
    if (static_cast<int>(beta.bx.size()) != shape.m || static_cast<int>(beta.bz.size()) != shape.n)
        throw ShapeMismatch("BetaClass: pairing vector lengths do not match the shape");
}

/// The positivity constraint beta.x_i >= beta.z_k used on the PAX side.
inline bool satisfies_ample(const BetaClass& beta) {
    for (long bx : beta.bx)
        for (long bz : beta.bz)
            if (bx < bz) return false;
    return true;
}

/// Pairing vector seen through a relabelling of [m]: the pair (x_i, beta.x_i)
/// moves together, so bx'[sigma(i)-1] = bx[i-1].
inline BetaClass permute_beta(const BetaClass& beta, const std::vector<int>& sigma) {
    BetaClass out = beta;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        out.bx[static_cast<std::size_t>(sigma[i]) - 1] = beta.bx[i];
    return out;
}

using DegreeVector = std::vector<long>;

} // namespace qd
