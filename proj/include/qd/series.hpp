#pragma once

#include "qd/factors.hpp"

#include <numeric>
#include <vector>

namespace qd {

/// Truncated q1-series of one model at one fixed point, one curve class, with
/// the common factor C_beta * J_beta excluded by construction. The coefficient
/// of q1^(offset + a) is coeffs[a]; nothing is defined beyond order.
struct PerBetaSeries {
    Model model = Model::GR;
    FixedPoint fp;
    BetaClass beta;
    long offset = 0;
    int order = 0;
    std::vector<Expr> coeffs; // size order + 1
};

/// q1 exponent of the a = 0 coefficient: the primal side carries
/// +sum_{j in fp} beta.x_j, the dual side -sum_{j in fp} beta.x_j.
inline long series_offset(Model model, const FixedPoint& fp, const BetaClass& beta) {
    long acc = 0;
    for (int i : fp.indices) acc += beta.bx[static_cast<std::size_t>(i) - 1];
    return model_side(model) == Side::Primal ? acc : -acc;
}

inline long sum_bx(const BetaClass& beta) {
    return std::accumulate(beta.bx.begin(), beta.bx.end(), 0L);
}

inline long sum_bz(const BetaClass& beta) {
    return std::accumulate(beta.bz.begin(), beta.bz.end(), 0L);
}

/// Builds the per-beta restriction of the model's series at fp: coefficient a
/// is the collapsed coefficient, carried to fp by the index permutation.
inline PerBetaSeries assemble(Model model, const FixedPoint& fp, const BetaClass& beta, int order,
                              const ModelShape& shape) {
    if (order < 0) throw ShapeMismatch("assemble: order must be nonnegative");
    validate_fixed_point(fp, shape);
    validate_beta(beta, shape);
    if (model_side(model) != fp.side)
        throw ShapeMismatch("assemble: fixed point lives on the wrong side for this model");

    std::vector<int> sigma = permute_to_standard(fp, shape);
    std::vector<int> inv = invert_permutation(sigma);
    BetaClass bperm = permute_beta(beta, sigma);
    ShiftedRoots roots(shape, bperm);

    PerBetaSeries out;
    out.model = model;
    out.fp = fp;
    out.beta = beta;
    out.order = order;
    out.offset = series_offset(model, fp, beta);
    out.coeffs.reserve(static_cast<std::size_t>(order) + 1);
    for (int a = 0; a <= order; ++a)
        out.coeffs.push_back(rename_x(collapsed(model, bperm, a, shape, roots), inv));
    return out;
}

enum class KernelKind { EXP, BINOM, NONE };
enum class PsiMode { GR_SIDE, PAX_SIDE };

/// Prefactor series in q1 with coefficient exprs up to the truncation order.
/// EXP is e^{(-1)^rank q1 / z}; BINOM is (1 + (-1)^rank q1)^Psi with Psi the
/// localized combined exponent (the beta-dependent integer part is included
/// through the shifted roots).
struct Kernel {
    KernelKind kind = KernelKind::NONE;
    int sign_rank = 0;
    Expr psi; // meaningful for BINOM only
    std::vector<Expr> coeffs;
};

namespace detail {

inline std::vector<Expr> binom_coeffs(const Expr& psi, int rank, int order) {
    std::vector<Expr> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    for (int a = 0; a <= order; ++a) {
        std::vector<Expr> fac;
        fac.push_back(Expr::constant(rat_sign_pow(static_cast<long>(rank) * a) / rat_factorial(a)));
        for (int h = 0; h < a; ++h) fac.push_back(psi - Expr::from_int(h));
        out.push_back(Expr::product(std::move(fac)));
    }
    return out;
}

} // namespace detail

inline Kernel kernel_series(KernelKind kind, int rank, PsiMode psi_mode, const BetaClass& beta,
                            const ModelShape& shape, int order) {
    if (order < 0) throw ShapeMismatch("kernel_series: order must be nonnegative");
    Kernel k;
    k.kind = kind;
    k.sign_rank = rank;
    switch (kind) {
    case KernelKind::NONE:
        k.coeffs.assign(static_cast<std::size_t>(order) + 1, Expr::from_int(0));
        k.coeffs[0] = Expr::from_int(1);
        return k;
    case KernelKind::EXP: {
        Expr z = Expr::variable(Var::zgiv());
        for (int a = 0; a <= order; ++a)
            k.coeffs.push_back(Expr::constant(rat_sign_pow(static_cast<long>(rank) * a) / rat_factorial(a)) *
                               Expr::pow(z, -a));
        return k;
    }
    case KernelKind::BINOM: {
        validate_beta(beta, shape);
        ShiftedRoots roots(shape, beta);
        std::vector<Expr> terms;
        if (psi_mode == PsiMode::GR_SIDE) {
            terms.push_back(Expr::from_int(shape.s()));
            for (int kk = 1; kk <= shape.n; ++kk) terms.push_back(roots.lz(kk));
            for (int i = 1; i <= shape.m; ++i) terms.push_back(-roots.lx(i));
        } else {
            terms.push_back(Expr::from_int(shape.r));
            for (int i = 1; i <= shape.m; ++i) terms.push_back(roots.lx(i));
            for (int kk = 1; kk <= shape.n; ++kk) terms.push_back(-roots.lz(kk));
        }
        k.psi = Expr::sum(std::move(terms));
        k.coeffs = detail::binom_coeffs(k.psi, rank, order);
        return k;
    }
    }
    throw Error("kernel_series: unreachable");
}

/// (1 + (-1)^rank q1)^N for an integer exponent N: the per-beta change-of-
/// variables factor in the equal-rank case. Orientation table, with
/// P_beta := sum_k beta.z_k - sum_i beta.x_i:
///   GR side:  the q' denominator exponent <c1F - c1E, beta> equals -P_beta,
///             so q'^beta contributes the factor with N = +P_beta;
///   PAX side: the denominator exponent <c1E - c1F, beta> equals +P_beta,
///             so q'^beta contributes N = -P_beta.
inline Kernel binom_integer_kernel(int rank, long exponent, int order) {
    Kernel k;
    k.kind = KernelKind::BINOM;
    k.sign_rank = rank;
    k.psi = Expr::from_int(exponent);
    k.coeffs = detail::binom_coeffs(k.psi, rank, order);
    return k;
}

/// beta-dependent part of the binomial exponent.
inline long psi_beta(const BetaClass& beta) { return sum_bz(beta) - sum_bx(beta); }

/// Coefficientwise product with a kernel, exact up to the truncation order.
inline PerBetaSeries convolve(const PerBetaSeries& s, const Kernel& k) {
    if (static_cast<int>(k.coeffs.size()) < s.order + 1)
        throw TruncationTooSmall("convolve: kernel support exceeds series order");
    PerBetaSeries out = s;
    for (int a = 0; a <= s.order; ++a) {
        std::vector<Expr> terms;
        for (int p = 0; p <= a; ++p)
            terms.push_back(s.coeffs[static_cast<std::size_t>(p)] *
                            k.coeffs[static_cast<std::size_t>(a - p)]);
        out.coeffs[static_cast<std::size_t>(a)] = Expr::sum(std::move(terms));
    }
    return out;
}

enum class CovDirection { GR_DUALITY, PAXPAXY };

/// The cluster change of variables acts on the q1 offset only: the dual-side
/// exponent a - sum_s beta.x_{r+j} is rewritten against the primal-side
/// exponent a + sum_r beta.x_i through the total sum over all of [m].
inline PerBetaSeries change_of_variables(PerBetaSeries s, CovDirection dir) {
    long shift = sum_bx(s.beta);
    s.offset += dir == CovDirection::GR_DUALITY ? shift : -shift;
    return s;
}

} // namespace qd
