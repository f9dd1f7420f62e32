#pragma once

#include "qd/expr.hpp"
#include "qd/localization.hpp"
#include "qd/pochhammer.hpp"
#include "qd/shape.hpp"

#include <unordered_set>
#include <vector>

namespace qd {

/// The four modification-factor families: GR / GR_HAT for the Grassmannian
/// bundle and its dual, PAX / PAXY for the two determinantal resolutions.
enum class Model { GR, GR_HAT, PAX, PAXY };

/// DIRECT is the defining display restricted to a fixed point, parametrized by
/// the degree vector d. FACTORED is the rewritten four-block form, parametrized
/// by the shifted degrees a (a_j = d_j - beta.x_j on the primal side,
/// a_j = d_j + beta.x_{r+j} on the dual side).
enum class Form { DIRECT, FACTORED };

enum class CFactorSide { GR_SIDE, PAX_SIDE };

inline Side model_side(Model m) {
    return (m == Model::GR || m == Model::PAX) ? Side::Primal : Side::Dual;
}

inline int model_rank(Model m, const ModelShape& shape) {
    return model_side(m) == Side::Primal ? shape.r : shape.s();
}

inline const char* model_name(Model m) {
    switch (m) {
    case Model::GR: return "gr";
    case Model::GR_HAT: return "gr-hat";
    case Model::PAX: return "pax";
    default: return "paxy";
    }
}

struct FactorSpec {
    Model model = Model::GR;
    Form form = Form::DIRECT;
    FixedPoint fp;
    BetaClass beta;
    DegreeVector degrees;
};

/// The shifted roots Lx_i = x_i/z + beta.x_i and Lz_k = z_k/z + beta.z_k in
/// which all collapsed coefficients are stated. Instances are shared
/// subtrees, so structural scans can recognize them by node identity.
class ShiftedRoots {
public:
    ShiftedRoots(const ModelShape& shape, const BetaClass& beta) {
        validate_beta(beta, shape);
        Expr z = Expr::variable(Var::zgiv());
        for (int i = 1; i <= shape.m; ++i)
            lx_.push_back(Expr::quotient(Expr::variable(Var::x(i)), z) +
                          Expr::from_int(beta.bx[static_cast<std::size_t>(i) - 1]));
        for (int k = 1; k <= shape.n; ++k)
            lz_.push_back(Expr::quotient(Expr::variable(Var::zk(k)), z) +
                          Expr::from_int(beta.bz[static_cast<std::size_t>(k) - 1]));
    }

    const Expr& lx(int i) const { return lx_.at(static_cast<std::size_t>(i) - 1); }
    const Expr& lz(int k) const { return lz_.at(static_cast<std::size_t>(k) - 1); }

    /// Node identities of all roots, for structural dependence checks.
    std::unordered_set<const ExprNode*> root_nodes() const {
        std::unordered_set<const ExprNode*> out;
        for (const auto& e : lx_) out.insert(e.raw());
        for (const auto& e : lz_) out.insert(e.raw());
        return out;
    }

private:
    std::vector<Expr> lx_;
    std::vector<Expr> lz_;
};

namespace detail {

inline Expr xv(int i) { return Expr::variable(Var::x(i)); }
inline Expr zkv(int k) { return Expr::variable(Var::zk(k)); }
inline Expr zgv() { return Expr::variable(Var::zgiv()); }
inline long bxof(const BetaClass& b, int i) { return b.bx[static_cast<std::size_t>(i) - 1]; }
inline long bzof(const BetaClass& b, int k) { return b.bz[static_cast<std::size_t>(k) - 1]; }
inline long dof(const DegreeVector& d, int j) { return d[static_cast<std::size_t>(j) - 1]; }

// ---- DIRECT forms at the standard fixed point -------------------------------
// Primal side substitutes y_j -> x_j, dual side w_j -> -x_{r+j}.

inline Expr direct_gr_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& d) {
    std::vector<Expr> f;
    Expr z = zgv();
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.r; ++i)
            if (i != j) f.push_back(poch_ratio_inv(xv(j) - xv(i), z, dof(d, j) - dof(d, i)));
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(xv(j) - xv(i), z, dof(d, j) - bxof(b, i)));
    for (int j = 1; j <= sh.r; ++j)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(-xv(j) + zkv(k), z, -dof(d, j) + bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr direct_gr_hat_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& d) {
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= s; ++i)
            if (i != j) f.push_back(poch_ratio_inv(-xv(r + j) + xv(r + i), z, dof(d, j) - dof(d, i)));
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(-xv(r + j) + xv(i), z, dof(d, j) + bxof(b, i)));
    for (int k = 1; k <= sh.n; ++k)
        for (int j = 1; j <= s; ++j)
            f.push_back(poch_ratio_inv(-xv(r + j) + zkv(k), z, dof(d, j) + bzof(b, k)));
    for (int i = 1; i <= sh.m; ++i)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(-xv(i) + zkv(k), z, -bxof(b, i) + bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr direct_pax_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& d) {
    std::vector<Expr> f;
    Expr z = zgv();
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.r; ++i)
            if (i != j) f.push_back(poch_ratio_inv(xv(j) - xv(i), z, dof(d, j) - dof(d, i)));
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(xv(j) - xv(i), z, dof(d, j) - bxof(b, i)));
    for (int j = 1; j <= sh.r; ++j)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio_inv(xv(j) - zkv(k), z, dof(d, j) - bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr direct_paxy_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& d) {
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int i = 1; i <= s; ++i)
        for (int j = 1; j <= s; ++j)
            if (i != j) f.push_back(poch_ratio_inv(-xv(r + i) + xv(r + j), z, dof(d, i) - dof(d, j)));
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(-xv(r + j) + xv(i), z, dof(d, j) + bxof(b, i)));
    for (int k = 1; k <= sh.n; ++k)
        for (int j = 1; j <= s; ++j)
            f.push_back(poch_ratio(xv(r + j) - zkv(k), z, -dof(d, j) - bzof(b, k)));
    for (int i = 1; i <= sh.m; ++i)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio_inv(xv(i) - zkv(k), z, bxof(b, i) - bzof(b, k)));
    return Expr::product(std::move(f));
}

// ---- FACTORED forms ---------------------------------------------------------
// Each carries all four blocks of its rewritten display; the rewriting assumes
// a_j >= 0, and the original display vanishes otherwise, so any negative a_j
// yields the zero expression.

inline bool any_negative(const DegreeVector& a) {
    for (long v : a)
        if (v < 0) return true;
    return false;
}

inline Expr factored_gr_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& a) {
    if (any_negative(a)) return Expr::from_int(0);
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int j = 1; j <= r; ++j)
        for (int i = 1; i <= r; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(xv(j) - xv(i) + Expr::from_int(bxof(b, j) - bxof(b, i)) * z,
                                           z, dof(a, j) - dof(a, i)));
    for (int j = 1; j <= r; ++j) {
        std::vector<Expr> num, den;
        for (int k = 1; k <= sh.n; ++k)
            for (long h = 0; h <= dof(a, j) - 1; ++h)
                num.push_back(zkv(k) - xv(j) + Expr::from_int(bzof(b, k) - bxof(b, j) - h) * z);
        for (int i = 1; i <= sh.m; ++i)
            for (long h = 1; h <= dof(a, j); ++h)
                den.push_back(xv(j) - xv(i) + Expr::from_int(bxof(b, j) - bxof(b, i) + h) * z);
        f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
    }
    for (int j = 1; j <= r; ++j)
        for (int i = 1; i <= s; ++i)
            f.push_back(poch_ratio(xv(j) - xv(r + i), z, bxof(b, j) - bxof(b, r + i)));
    for (int j = 1; j <= r; ++j)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(zkv(k) - xv(j), z, -bxof(b, j) + bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr factored_gr_hat_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& a) {
    if (any_negative(a)) return Expr::from_int(0);
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= s; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(
                    xv(r + i) - xv(r + j) + Expr::from_int(bxof(b, r + i) - bxof(b, r + j)) * z,
                    z, dof(a, j) - dof(a, i)));
    for (int j = 1; j <= s; ++j) {
        std::vector<Expr> num, den;
        for (int k = 1; k <= sh.n; ++k)
            for (long h = 1; h <= dof(a, j); ++h)
                num.push_back(-xv(r + j) + zkv(k) + Expr::from_int(bzof(b, k) - bxof(b, r + j) + h) * z);
        for (int i = 1; i <= sh.m; ++i)
            for (long h = 1; h <= dof(a, j); ++h)
                den.push_back(-xv(r + j) + xv(i) + Expr::from_int(bxof(b, i) - bxof(b, r + j) + h) * z);
        f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
    }
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= s; ++j)
            f.push_back(poch_ratio(xv(i) - xv(r + j), z, bxof(b, i) - bxof(b, r + j)));
    for (int i = 1; i <= r; ++i)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(zkv(k) - xv(i), z, -bxof(b, i) + bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr factored_pax_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& a) {
    if (any_negative(a)) return Expr::from_int(0);
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int j = 1; j <= r; ++j)
        for (int i = 1; i <= r; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(xv(j) - xv(i) + Expr::from_int(bxof(b, j) - bxof(b, i)) * z,
                                           z, dof(a, j) - dof(a, i)));
    for (int j = 1; j <= r; ++j) {
        std::vector<Expr> num, den;
        for (int k = 1; k <= sh.n; ++k)
            for (long h = 1; h <= dof(a, j); ++h)
                num.push_back(xv(j) - zkv(k) + Expr::from_int(bxof(b, j) - bzof(b, k) + h) * z);
        for (int i = 1; i <= sh.m; ++i)
            for (long h = 1; h <= dof(a, j); ++h)
                den.push_back(xv(j) - xv(i) + Expr::from_int(bxof(b, j) - bxof(b, i) + h) * z);
        f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
    }
    for (int j = 1; j <= r; ++j)
        for (int i = 1; i <= s; ++i)
            f.push_back(poch_ratio(xv(j) - xv(r + i), z, bxof(b, j) - bxof(b, r + i)));
    for (int j = 1; j <= r; ++j)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio_inv(xv(j) - zkv(k), z, bxof(b, j) - bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr factored_paxy_f0(const ModelShape& sh, const BetaClass& b, const DegreeVector& a) {
    if (any_negative(a)) return Expr::from_int(0);
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= s; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(
                    xv(r + i) - xv(r + j) + Expr::from_int(bxof(b, r + i) - bxof(b, r + j)) * z,
                    z, dof(a, j) - dof(a, i)));
    for (int j = 1; j <= s; ++j) {
        std::vector<Expr> num, den;
        for (int k = 1; k <= sh.n; ++k)
            for (long h = 0; h <= dof(a, j) - 1; ++h)
                num.push_back(xv(r + j) - zkv(k) + Expr::from_int(bxof(b, r + j) - bzof(b, k) - h) * z);
        for (int i = 1; i <= sh.m; ++i)
            for (long h = 1; h <= dof(a, j); ++h)
                den.push_back(xv(i) - xv(r + j) + Expr::from_int(bxof(b, i) - bxof(b, r + j) + h) * z);
        f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
    }
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= r; ++i)
            f.push_back(poch_ratio(xv(i) - xv(r + j), z, bxof(b, i) - bxof(b, r + j)));
    for (int i = 1; i <= r; ++i)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio_inv(xv(i) - zkv(k), z, bxof(b, i) - bzof(b, k)));
    return Expr::product(std::move(f));
}

inline Expr build_f0(Model model, Form form, const ModelShape& sh, const BetaClass& b,
                     const DegreeVector& deg) {
    switch (model) {
    case Model::GR: return form == Form::DIRECT ? direct_gr_f0(sh, b, deg) : factored_gr_f0(sh, b, deg);
    case Model::GR_HAT:
        return form == Form::DIRECT ? direct_gr_hat_f0(sh, b, deg) : factored_gr_hat_f0(sh, b, deg);
    case Model::PAX: return form == Form::DIRECT ? direct_pax_f0(sh, b, deg) : factored_pax_f0(sh, b, deg);
    default: return form == Form::DIRECT ? direct_paxy_f0(sh, b, deg) : factored_paxy_f0(sh, b, deg);
    }
}

inline Expr c_factor_f0(CFactorSide side, const ModelShape& sh, const BetaClass& b) {
    std::vector<Expr> f;
    Expr z = zgv();
    const int r = sh.r, s = sh.s();
    if (side == CFactorSide::GR_SIDE) {
        for (int i = 1; i <= r; ++i)
            for (int k = 1; k <= s; ++k)
                f.push_back(poch_ratio(xv(i) - xv(r + k), z, bxof(b, i) - bxof(b, r + k)));
        for (int j = 1; j <= r; ++j)
            for (int k = 1; k <= sh.n; ++k)
                f.push_back(poch_ratio(zkv(k) - xv(j), z, -bxof(b, j) + bzof(b, k)));
    } else {
        for (int j = 1; j <= s; ++j)
            for (int i = 1; i <= r; ++i)
                f.push_back(poch_ratio(xv(i) - xv(r + j), z, bxof(b, i) - bxof(b, r + j)));
        for (int i = 1; i <= r; ++i)
            for (int k = 1; k <= sh.n; ++k)
                f.push_back(poch_ratio_inv(xv(i) - zkv(k), z, bxof(b, i) - bzof(b, k)));
    }
    return Expr::product(std::move(f));
}

} // namespace detail

/// Restriction of the model's modification factor to the given fixed point.
/// General fixed points reduce to the standard one by the index permutation:
/// the pairing vector is permuted and the x-variables relabelled back.
inline Expr restricted_factor(const FactorSpec& spec, const ModelShape& shape) {
    validate_fixed_point(spec.fp, shape);
    validate_beta(spec.beta, shape);
    if (model_side(spec.model) != spec.fp.side)
        throw ShapeMismatch("restricted_factor: fixed point lives on the wrong side for this model");
    if (static_cast<int>(spec.degrees.size()) != model_rank(spec.model, shape))
        throw ShapeMismatch("restricted_factor: degree vector length does not match the gauge rank");

    std::vector<int> sigma = permute_to_standard(spec.fp, shape);
    BetaClass bperm = permute_beta(spec.beta, sigma);
    Expr f0 = detail::build_f0(spec.model, spec.form, shape, bperm, spec.degrees);
    return rename_x(f0, invert_permutation(sigma));
}

/// Map a direct-form degree vector to the factored-form shifted degrees of the
/// given model (at the standard fixed point of its side).
inline DegreeVector shifted_degrees(Model model, const BetaClass& beta, const DegreeVector& d,
                                    const ModelShape& shape) {
    DegreeVector a(d.size());
    if (model_side(model) == Side::Primal) {
        for (std::size_t j = 0; j < d.size(); ++j) a[j] = d[j] - beta.bx[j];
    } else {
        for (std::size_t j = 0; j < d.size(); ++j)
            a[j] = d[j] + beta.bx[static_cast<std::size_t>(shape.r) + j];
    }
    return a;
}

/// The common factor pulled out of the factored forms: C_beta on the
/// Grassmannian side, C~_beta on the PAX/PAXY side.
inline Expr c_factor(CFactorSide side, const FixedPoint& fp, const BetaClass& beta,
                     const ModelShape& shape) {
    validate_fixed_point(fp, shape);
    validate_beta(beta, shape);
    std::vector<int> sigma = permute_to_standard(fp, shape);
    BetaClass bperm = permute_beta(beta, sigma);
    Expr f0 = detail::c_factor_f0(side, shape, bperm);
    return rename_x(f0, invert_permutation(sigma));
}

/// One composition's bracketed product of the collapsed coefficient, in the
/// shifted roots, without the explicit z^{(n-m)a} prefactor.
inline Expr collapsed_term(Model model, const ShiftedRoots& roots, const DegreeVector& a,
                           const ModelShape& sh) {
    const Expr one = Expr::from_int(1);
    const int r = sh.r, s = sh.s();
    std::vector<Expr> f;
    auto dof = [&](int j) { return a[static_cast<std::size_t>(j) - 1]; };
    switch (model) {
    case Model::GR:
        for (int j = 1; j <= r; ++j)
            for (int i = 1; i <= r; ++i)
                if (i != j) f.push_back(poch_ratio_inv(roots.lx(j) - roots.lx(i), one, dof(j) - dof(i)));
        for (int j = 1; j <= r; ++j) {
            std::vector<Expr> num, den;
            for (int k = 1; k <= sh.n; ++k)
                for (long h = 0; h <= dof(j) - 1; ++h)
                    num.push_back(roots.lz(k) - roots.lx(j) - Expr::from_int(h));
            for (int i = 1; i <= sh.m; ++i)
                for (long h = 1; h <= dof(j); ++h)
                    den.push_back(roots.lx(j) - roots.lx(i) + Expr::from_int(h));
            f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
        }
        break;
    case Model::GR_HAT:
        for (int j = 1; j <= s; ++j)
            for (int i = 1; i <= s; ++i)
                if (i != j)
                    f.push_back(poch_ratio_inv(roots.lx(r + i) - roots.lx(r + j), one, dof(j) - dof(i)));
        for (int j = 1; j <= s; ++j) {
            std::vector<Expr> num, den;
            for (int k = 1; k <= sh.n; ++k)
                for (long h = 1; h <= dof(j); ++h)
                    num.push_back(roots.lz(k) - roots.lx(r + j) + Expr::from_int(h));
            for (int i = 1; i <= sh.m; ++i)
                for (long h = 1; h <= dof(j); ++h)
                    den.push_back(roots.lx(i) - roots.lx(r + j) + Expr::from_int(h));
            f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
        }
        break;
    case Model::PAX:
        for (int j = 1; j <= r; ++j)
            for (int i = 1; i <= r; ++i)
                if (i != j)
                    f.push_back(poch_ratio_inv(-roots.lx(i) + roots.lx(j), one, dof(j) - dof(i)));
        for (int j = 1; j <= r; ++j) {
            std::vector<Expr> num, den;
            for (int k = 1; k <= sh.n; ++k)
                for (long h = 1; h <= dof(j); ++h)
                    num.push_back(-roots.lz(k) + roots.lx(j) + Expr::from_int(h));
            for (int i = 1; i <= sh.m; ++i)
                for (long h = 1; h <= dof(j); ++h)
                    den.push_back(-roots.lx(i) + roots.lx(j) + Expr::from_int(h));
            f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
        }
        break;
    case Model::PAXY:
        for (int j = 1; j <= s; ++j)
            for (int i = 1; i <= s; ++i)
                if (i != j)
                    f.push_back(poch_ratio_inv(-roots.lx(r + j) + roots.lx(r + i), one, dof(j) - dof(i)));
        for (int j = 1; j <= s; ++j) {
            std::vector<Expr> num, den;
            for (int k = 1; k <= sh.n; ++k)
                for (long h = 0; h <= dof(j) - 1; ++h)
                    num.push_back(-roots.lz(k) + roots.lx(r + j) - Expr::from_int(h));
            for (int i = 1; i <= sh.m; ++i)
                for (long h = 1; h <= dof(j); ++h)
                    den.push_back(-roots.lx(r + j) + roots.lx(i) + Expr::from_int(h));
            f.push_back(Expr::quotient(Expr::product(std::move(num)), Expr::product(std::move(den))));
        }
        break;
    }
    return Expr::product(std::move(f));
}

/// Collapsed coefficient at the standard fixed point: z^{(n-m)a} times the sum
/// of the bracketed products over compositions of a with nonnegative parts.
inline Expr collapsed(Model model, const BetaClass& beta, long a, const ModelShape& shape,
                      const ShiftedRoots& roots) {
    if (a < 0) throw Error("collapsed: a must be nonnegative");
    validate_beta(beta, shape);
    int rank = model_rank(model, shape);
    std::vector<Expr> terms;
    for (const auto& av : compositions(a, rank, 0))
        terms.push_back(collapsed_term(model, roots, av, shape));
    Expr zpow = Expr::pow(Expr::variable(Var::zgiv()), static_cast<int>((shape.n - shape.m) * a));
    return zpow * Expr::sum(std::move(terms));
}

inline Expr collapsed(Model model, const BetaClass& beta, long a, const ModelShape& shape) {
    ShiftedRoots roots(shape, beta);
    return collapsed(model, beta, a, shape, roots);
}

} // namespace qd
