#pragma once

#include "qd/sampling.hpp"
#include "qd/series.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace qd {

/// Corank regimes of the duality statements.
enum class PropCase { GEQ2, PLUS1, EQUAL };

/// Which collapsed-coefficient family a proposition run compares.
enum class Which { GR, PAXPAXY };

enum class Theorem { BUILDING_BLOCK, PAX_PAXY };

inline PropCase case_for_shape(const ModelShape& shape) {
    if (shape.m >= shape.n + 2) return PropCase::GEQ2;
    if (shape.m == shape.n + 1) return PropCase::PLUS1;
    return PropCase::EQUAL;
}

inline const char* case_name(PropCase c) {
    switch (c) {
    case PropCase::GEQ2: return "corank-geq-2";
    case PropCase::PLUS1: return "corank-1";
    default: return "equal-rank";
    }
}

inline void require_case(PropCase c, const ModelShape& shape) {
    if (case_for_shape(shape) != c)
        throw CaseMismatch(std::string("case ") + case_name(c) + " is inconsistent with shape (m=" +
                           std::to_string(shape.m) + ", n=" + std::to_string(shape.n) + ")");
}

/// One verified identity instance; the serializable unit of every report.
struct CheckRecord {
    std::string id;        // stable identity key, e.g. "collapsed-duality/gr/corank-1"
    std::string statement; // self-contained statement of what was checked
    int m = 0, n = 0, r = 0;
    std::vector<long> bx, bz;
    bool ample = false;
    std::vector<long> degrees;   // lemma-form checks
    std::vector<int> fixed_point; // series checks away from the standard point
    long a = -1;   // -1 when not applicable
    int order = -1;
    int points = 0;
    bool pass = true;
    std::string witness; // failure detail: point attempt and both values
    double elapsed_ms = 0.0;

    auto sort_key() const {
        return std::tie(id, m, n, r, bx, bz, fixed_point, degrees, a, order);
    }
};

struct Report {
    std::vector<CheckRecord> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void append(Report other) {
        for (auto& c : other.checks) checks.push_back(std::move(c));
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Runs fn at `points` pole-free sample points; pole hits resample with the
/// next attempt, with a bounded retry budget. Returns the failure witness of
/// the first failing point, if any.
inline std::optional<std::string>
at_pole_free_points(const ModelShape& shape, std::uint64_t seed, int points,
                    const std::function<std::optional<std::string>(Evaluator&, std::uint32_t)>& fn) {
    const std::uint32_t max_attempts = static_cast<std::uint32_t>(points) + 100;
    int successes = 0;
    for (std::uint32_t attempt = 0; successes < points; ++attempt) {
        if (attempt >= max_attempts)
            throw EvaluationExhausted("too many pole hits while sampling points");
        Point pt = random_point(shape, seed, attempt);
        Evaluator ev(pt);
        try {
            auto witness = fn(ev, attempt);
            if (witness) return witness;
        } catch (const DivisionByZero&) {
            continue; // pole: resample
        }
        ++successes;
    }
    return std::nullopt;
}

inline std::optional<std::string> expr_pair_witness(Evaluator& ev, std::uint32_t attempt,
                                                    const Expr& lhs, const Expr& rhs) {
    Rat lv = ev.eval(lhs);
    Rat rv = ev.eval(rhs);
    if (lv == rv) return std::nullopt;
    std::ostringstream os;
    os << "attempt " << attempt << ": lhs = " << lv.str() << ", rhs = " << rv.str();
    return os.str();
}

inline void fill_shape_beta(CheckRecord& rec, const ModelShape& shape, const BetaClass& beta) {
    rec.m = shape.m;
    rec.n = shape.n;
    rec.r = shape.r;
    rec.bx = beta.bx;
    rec.bz = beta.bz;
    rec.ample = beta.ample;
}

} // namespace detail

/// Two-form check: the direct display equals its factored rewriting under the
/// degree substitution, at pole-free sample points.
inline CheckRecord check_two_form(Model model, const ModelShape& shape, const BetaClass& beta,
                                  const DegreeVector& d, std::uint64_t seed, int points) {
    detail::Stopwatch sw;
    CheckRecord rec;
    rec.id = std::string("lemma-two-form/") + model_name(model);
    rec.statement = model_side(model) == Side::Primal
                        ? "direct modification factor equals factored form under a_j = d_j - beta.x_j"
                        : "direct modification factor equals factored form under a_j = d_j + beta.x_{r+j}";
    detail::fill_shape_beta(rec, shape, beta);
    rec.degrees = d;
    rec.points = points;

    FixedPoint fp = FixedPoint::standard(shape, model_side(model));
    Expr lhs = restricted_factor({model, Form::DIRECT, fp, beta, d}, shape);
    Expr rhs = restricted_factor({model, Form::FACTORED, fp, beta, shifted_degrees(model, beta, d, shape)},
                                 shape);
    auto witness = detail::at_pole_free_points(
        shape, seed, points,
        [&](Evaluator& ev, std::uint32_t attempt) {
            return detail::expr_pair_witness(ev, attempt, lhs, rhs);
        });
    if (witness) {
        rec.pass = false;
        rec.witness = *witness;
    }
    rec.elapsed_ms = sw.ms();
    return rec;
}

/// Proposition run: for each a <= a_max, both sides of the collapsed-coefficient
/// identity of the shape's corank case are assembled independently from their
/// displays and compared exactly at sampled points.
inline Report verify_proposition(PropCase pcase, Which which, const ModelShape& shape,
                                 const BetaClass& beta, long a_max, std::uint64_t seed, int points) {
    require_case(pcase, shape);
    validate_beta(beta, shape);

    const Model lhs_model = which == Which::GR ? Model::GR : Model::PAXY;
    const Model rhs_model = which == Which::GR ? Model::GR_HAT : Model::PAX;
    const int rank = which == Which::GR ? shape.s() : shape.r;
    const char* family = which == Which::GR ? "gr" : "paxpaxy";

    Report report;
    for (long a = 0; a <= a_max; ++a) {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = std::string("collapsed-duality/") + family + "/" + case_name(pcase);
        detail::fill_shape_beta(rec, shape, beta);
        rec.a = a;
        rec.points = points;

        Expr lhs = collapsed(lhs_model, beta, a, shape);

        Expr rhs;
        Expr z = Expr::variable(Var::zgiv());
        switch (pcase) {
        case PropCase::GEQ2:
            rec.statement = which == Which::GR ? "N[beta,a] == NHat[beta,a] (m >= n+2)"
                                               : "N_paxy[beta,a] == N_pax[beta,a] (m >= n+2)";
            rhs = collapsed(rhs_model, beta, a, shape);
            break;
        case PropCase::PLUS1: {
            rec.statement = which == Which::GR
                                ? "N[beta,a] == sum_p (-1)^{s(a-p)}/(a-p)! z^{p-a} NHat[beta,p]"
                                : "N_paxy[beta,a] == sum_p (-1)^{r(a-p)}/(a-p)! z^{p-a} N_pax[beta,p]";
            std::vector<Expr> terms;
            for (long p = 0; p <= a; ++p) {
                Expr coeff = Expr::constant(rat_sign_pow(rank * (a - p)) / rat_factorial(a - p));
                terms.push_back(coeff * Expr::pow(z, static_cast<int>(p - a)) *
                                collapsed(rhs_model, beta, p, shape));
            }
            rhs = Expr::sum(std::move(terms));
            break;
        }
        case PropCase::EQUAL: {
            rec.statement =
                which == Which::GR
                    ? "N[beta,a] == sum_p C(s + sum Lz - sum Lx, p) (-1)^{sp} NHat[beta,a-p]"
                    : "N_paxy[beta,a] == sum_p C(r + sum Lx - sum Lz, p) (-1)^{rp} N_pax[beta,a-p]";
            ShiftedRoots roots(shape, beta);
            std::vector<Expr> psi_terms;
            if (which == Which::GR) {
                psi_terms.push_back(Expr::from_int(shape.s()));
                for (int k = 1; k <= shape.n; ++k) psi_terms.push_back(roots.lz(k));
                for (int i = 1; i <= shape.m; ++i) psi_terms.push_back(-roots.lx(i));
            } else {
                psi_terms.push_back(Expr::from_int(shape.r));
                for (int i = 1; i <= shape.m; ++i) psi_terms.push_back(roots.lx(i));
                for (int k = 1; k <= shape.n; ++k) psi_terms.push_back(-roots.lz(k));
            }
            Expr psi = Expr::sum(std::move(psi_terms));
            std::vector<Expr> terms;
            for (long p = 0; p <= a; ++p) {
                std::vector<Expr> fac;
                for (long h = 0; h < p; ++h)
                    fac.push_back(Expr::quotient(psi - Expr::from_int(h), Expr::from_int(p - h)));
                fac.push_back(Expr::constant(rat_sign_pow(rank * p)));
                fac.push_back(collapsed(rhs_model, beta, a - p, shape));
                terms.push_back(Expr::product(std::move(fac)));
            }
            rhs = Expr::sum(std::move(terms));
            break;
        }
        }

        auto witness = detail::at_pole_free_points(
            shape, seed, points,
            [&](Evaluator& ev, std::uint32_t attempt) {
                return detail::expr_pair_witness(ev, attempt, lhs, rhs);
            });
        if (witness) {
            rec.pass = false;
            rec.witness = *witness;
        }
        rec.elapsed_ms = sw.ms();
        report.checks.push_back(std::move(rec));
    }
    return report;
}

/// Theorem run at one fixed-point pair fp <-> fp^c: assembles both per-beta
/// series, multiplies the dual-to-primal side by the case's kernel (whose
/// binomial exponent already carries the beta-dependent integer part through
/// the shifted roots), applies the change of variables to the q1 offset, and
/// compares coefficientwise at sampled points. The common factor pulled out of
/// both sides is cross-checked once per run as its own assertion.
inline Report verify_theorem(Theorem which, PropCase pcase, const ModelShape& shape,
                             const FixedPoint& fp_primal, const BetaClass& beta, int order,
                             std::uint64_t seed, int points) {
    require_case(pcase, shape);
    validate_beta(beta, shape);
    if (order < 1) throw TruncationTooSmall("verify_theorem: order must be at least 1");

    FixedPoint fpP = fp_primal.side == Side::Primal ? fp_primal : complement(fp_primal, shape);
    FixedPoint fpD = complement(fpP, shape);

    const char* family = which == Theorem::BUILDING_BLOCK ? "gr" : "paxpaxy";
    const int rank = which == Theorem::BUILDING_BLOCK ? shape.s() : shape.r;
    const PsiMode psi_mode = which == Theorem::BUILDING_BLOCK ? PsiMode::GR_SIDE : PsiMode::PAX_SIDE;

    PerBetaSeries lhs, rhs;
    if (which == Theorem::BUILDING_BLOCK) {
        lhs = assemble(Model::GR, fpP, beta, order, shape);
        rhs = assemble(Model::GR_HAT, fpD, beta, order, shape);
    } else {
        lhs = assemble(Model::PAXY, fpD, beta, order, shape);
        rhs = assemble(Model::PAX, fpP, beta, order, shape);
    }

    KernelKind kind = pcase == PropCase::GEQ2    ? KernelKind::NONE
                      : pcase == PropCase::PLUS1 ? KernelKind::EXP
                                                 : KernelKind::BINOM;
    Kernel kernel = kernel_series(kind, rank, psi_mode, beta, shape, order);
    PerBetaSeries rhs_cov = change_of_variables(
        convolve(rhs, kernel),
        which == Theorem::BUILDING_BLOCK ? CovDirection::GR_DUALITY : CovDirection::PAXPAXY);

    Report report;

    { // integer offset bookkeeping
        CheckRecord rec;
        rec.id = std::string("series-duality/") + family + "/offset";
        rec.statement = "q1 offsets agree after the change of variables";
        detail::fill_shape_beta(rec, shape, beta);
        rec.fixed_point = fpP.indices;
        rec.order = order;
        rec.pass = lhs.offset == rhs_cov.offset;
        if (!rec.pass)
            rec.witness = "lhs offset " + std::to_string(lhs.offset) + ", rhs offset " +
                          std::to_string(rhs_cov.offset);
        report.checks.push_back(std::move(rec));
    }

    for (int a = 0; a <= order; ++a) {
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = std::string("series-duality/") + family + "/" + case_name(pcase);
        rec.statement = which == Theorem::BUILDING_BLOCK
                            ? "I-series of the r-plane side equals kernel * dual side under the "
                              "change of variables, coefficient by coefficient"
                            : "PAXY-side I-series equals kernel * PAX side under the change of "
                              "variables, coefficient by coefficient";
        detail::fill_shape_beta(rec, shape, beta);
        rec.fixed_point = fpP.indices;
        rec.a = a;
        rec.order = order;
        rec.points = points;
        auto witness = detail::at_pole_free_points(
            shape, seed, points,
            [&](Evaluator& ev, std::uint32_t attempt) {
                return detail::expr_pair_witness(ev, attempt, lhs.coeffs[static_cast<std::size_t>(a)],
                                                 rhs_cov.coeffs[static_cast<std::size_t>(a)]);
            });
        if (witness) {
            rec.pass = false;
            rec.witness = *witness;
        }
        rec.elapsed_ms = sw.ms();
        report.checks.push_back(std::move(rec));
    }

    { // both sides pulled out the same common factor
        detail::Stopwatch sw;
        CheckRecord rec;
        rec.id = std::string("common-factor/") + family;
        rec.statement = "factored forms at degree zero agree across the fixed-point pair and equal "
                        "the common factor";
        detail::fill_shape_beta(rec, shape, beta);
        rec.fixed_point = fpP.indices;
        rec.points = points;

        Model mp = which == Theorem::BUILDING_BLOCK ? Model::GR : Model::PAX;
        Model md = which == Theorem::BUILDING_BLOCK ? Model::GR_HAT : Model::PAXY;
        CFactorSide cside =
            which == Theorem::BUILDING_BLOCK ? CFactorSide::GR_SIDE : CFactorSide::PAX_SIDE;
        Expr p0 = restricted_factor(
            {mp, Form::FACTORED, fpP, beta, DegreeVector(static_cast<std::size_t>(shape.r), 0)}, shape);
        Expr d0 = restricted_factor(
            {md, Form::FACTORED, fpD, beta, DegreeVector(static_cast<std::size_t>(shape.s()), 0)},
            shape);
        Expr cf = c_factor(cside, fpP, beta, shape);
        auto witness = detail::at_pole_free_points(
            shape, seed, points,
            [&](Evaluator& ev, std::uint32_t attempt) {
                if (auto w = detail::expr_pair_witness(ev, attempt, p0, d0)) return w;
                return detail::expr_pair_witness(ev, attempt, p0, cf);
            });
        if (witness) {
            rec.pass = false;
            rec.witness = *witness;
        }
        rec.elapsed_ms = sw.ms();
        report.checks.push_back(std::move(rec));
    }

    return report;
}

/// Theorem run at the standard fixed-point pair.
inline Report verify_theorem(Theorem which, PropCase pcase, const ModelShape& shape,
                             const BetaClass& beta, int order, std::uint64_t seed, int points) {
    return verify_theorem(which, pcase, shape, FixedPoint::standard(shape, Side::Primal), beta, order,
                          seed, points);
}

/// The exponent rewrites relating the two sides' q1 powers, as pure integer
/// identities in the pairing data (no expressions involved).
inline bool offset_identities_hold(const ModelShape& shape, const BetaClass& beta, long a) {
    long sum_r = 0, sum_s = 0, sum_m = 0;
    for (int i = 1; i <= shape.r; ++i) sum_r += beta.bx[static_cast<std::size_t>(i) - 1];
    for (int j = shape.r + 1; j <= shape.m; ++j) sum_s += beta.bx[static_cast<std::size_t>(j) - 1];
    for (int i = 1; i <= shape.m; ++i) sum_m += beta.bx[static_cast<std::size_t>(i) - 1];
    bool primal_to_dual = (a + sum_r) == (a - sum_s) + sum_m;
    bool dual_to_primal = (a - sum_s) == (a + sum_r) - sum_m;
    return primal_to_dual && dual_to_primal;
}

} // namespace qd
