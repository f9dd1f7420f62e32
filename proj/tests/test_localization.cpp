#include <catch2/catch_amalgamated.hpp>

#include "qd/factors.hpp"
#include "qd/localization.hpp"
#include "qd/sampling.hpp"

using namespace qd;

namespace {

FixedPoint primal_fp(std::vector<int> indices) {
    FixedPoint fp;
    fp.side = Side::Primal;
    fp.indices = std::move(indices);
    return fp;
}

FixedPoint dual_fp(std::vector<int> indices) {
    FixedPoint fp;
    fp.side = Side::Dual;
    fp.indices = std::move(indices);
    return fp;
}

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long out = 1;
    for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
    return out;
}

} // namespace

TEST_CASE("complement flips the index subset") {
    ModelShape sh42(4, 1, 2);
    CHECK(complement(primal_fp({1, 2}), sh42).indices == std::vector<int>{3, 4});
    CHECK(complement(primal_fp({1, 3}), sh42).indices == std::vector<int>{2, 4});
}

TEST_CASE("complement is an involution") {
    for (int m = 2; m <= 6; ++m)
        for (int r = 1; r < m; ++r) {
            ModelShape sh(m, 1, r);
            for (const auto& fp : enumerate_fixed_points(sh, Side::Primal)) {
                FixedPoint back = complement(complement(fp, sh), sh);
                CHECK(back.indices == fp.indices);
                CHECK(back.side == fp.side);
            }
        }
}

TEST_CASE("fixed point counts and the complement bijection") {
    for (int m = 2; m <= 6; ++m)
        for (int r = 1; r < m; ++r) {
            ModelShape sh(m, 1, r);
            auto primal = enumerate_fixed_points(sh, Side::Primal);
            auto dual = enumerate_fixed_points(sh, Side::Dual);
            CHECK(static_cast<long>(primal.size()) == binom(m, r));
            CHECK(static_cast<long>(dual.size()) == binom(m, m - r));
            std::vector<std::vector<int>> images;
            for (const auto& fp : primal) images.push_back(complement(fp, sh).indices);
            std::sort(images.begin(), images.end());
            images.erase(std::unique(images.begin(), images.end()), images.end());
            CHECK(images.size() == primal.size());
        }
}

TEST_CASE("tautological root restriction on the r-plane side") {
    CHECK(restrict_y(primal_fp({1, 3}), 2) == Var::x(3));
    CHECK(restrict_y(primal_fp({1, 2, 3}), 2) == Var::x(2)); // standard point: y_k -> x_k
    CHECK(restrict_y(primal_fp({2}), 1) == Var::x(2));
    CHECK_THROWS_AS(restrict_y(primal_fp({1, 3}), 5), IndexOutOfRange);
}

TEST_CASE("tautological root restriction on the dual side is negated") {
    ModelShape sh(3, 1, 2); // s = 1
    Point p = random_point(sh, 3, 0);
    Expr w1 = restrict_w(dual_fp({2}), 1);
    CHECK(eval(w1, p) == -p.value(Var::x(2)));

    // standard complement {r+1..m}: w_k -> -x_{r+k}
    ModelShape sh2(5, 1, 3);
    Point p2 = random_point(sh2, 3, 0);
    Expr w2 = restrict_w(dual_fp({4, 5}), 2);
    CHECK(eval(w2, p2) == -p2.value(Var::x(5)));

    Expr w_mid = restrict_w(dual_fp({1, 4}), 2);
    CHECK(eval(w_mid, p2) == -p2.value(Var::x(4)));
    CHECK_THROWS_AS(restrict_w(dual_fp({1, 4}), 3), IndexOutOfRange);
}

TEST_CASE("permutation to the standard fixed point") {
    ModelShape sh31(3, 1, 1);
    CHECK(permute_to_standard(primal_fp({1}), sh31) == std::vector<int>{1, 2, 3});
    CHECK(permute_to_standard(primal_fp({2}), sh31) == std::vector<int>{2, 1, 3});

    ModelShape sh42(4, 2, 2);
    CHECK(permute_to_standard(primal_fp({2, 4}), sh42) == std::vector<int>{3, 1, 4, 2});

    // the dual-side subset maps onto {r+1..m}
    CHECK(permute_to_standard(dual_fp({1, 3}), sh42) == std::vector<int>{3, 1, 4, 2});
}

namespace {

// Oracle: the defining display with y_j -> x_{i_j} substituted directly,
// assembled here with no index permutation at all.
Expr direct_restriction_oracle_gr(const ModelShape& sh, const FixedPoint& fp, const BetaClass& beta,
                                  const DegreeVector& d) {
    auto xv = [](int i) { return Expr::variable(Var::x(i)); };
    auto y = [&](int j) { return xv(fp.indices[static_cast<std::size_t>(j) - 1]); };
    Expr z = Expr::variable(Var::zgiv());
    std::vector<Expr> f;
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.r; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(y(j) - y(i), z,
                                           d[static_cast<std::size_t>(j) - 1] -
                                               d[static_cast<std::size_t>(i) - 1]));
    for (int j = 1; j <= sh.r; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(y(j) - xv(i), z,
                                   d[static_cast<std::size_t>(j) - 1] -
                                       beta.bx[static_cast<std::size_t>(i) - 1]));
    for (int j = 1; j <= sh.r; ++j)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(-y(j) + Expr::variable(Var::zk(k)), z,
                                   -d[static_cast<std::size_t>(j) - 1] +
                                       beta.bz[static_cast<std::size_t>(k) - 1]));
    return Expr::product(std::move(f));
}

Expr direct_restriction_oracle_gr_hat(const ModelShape& sh, const FixedPoint& fp,
                                      const BetaClass& beta, const DegreeVector& d) {
    auto xv = [](int i) { return Expr::variable(Var::x(i)); };
    auto w = [&](int j) { return -xv(fp.indices[static_cast<std::size_t>(j) - 1]); };
    Expr z = Expr::variable(Var::zgiv());
    const int s = sh.s();
    std::vector<Expr> f;
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= s; ++i)
            if (i != j)
                f.push_back(poch_ratio_inv(w(j) - w(i), z,
                                           d[static_cast<std::size_t>(j) - 1] -
                                               d[static_cast<std::size_t>(i) - 1]));
    for (int j = 1; j <= s; ++j)
        for (int i = 1; i <= sh.m; ++i)
            f.push_back(poch_ratio(w(j) + xv(i), z,
                                   d[static_cast<std::size_t>(j) - 1] +
                                       beta.bx[static_cast<std::size_t>(i) - 1]));
    for (int k = 1; k <= sh.n; ++k)
        for (int j = 1; j <= s; ++j)
            f.push_back(poch_ratio_inv(w(j) + Expr::variable(Var::zk(k)), z,
                                       d[static_cast<std::size_t>(j) - 1] +
                                           beta.bz[static_cast<std::size_t>(k) - 1]));
    for (int i = 1; i <= sh.m; ++i)
        for (int k = 1; k <= sh.n; ++k)
            f.push_back(poch_ratio(-xv(i) + Expr::variable(Var::zk(k)), z,
                                   -beta.bx[static_cast<std::size_t>(i) - 1] +
                                       beta.bz[static_cast<std::size_t>(k) - 1]));
    return Expr::product(std::move(f));
}

} // namespace

TEST_CASE("index permutation reproduces the direct substitution at every fixed point") {
    std::vector<ModelShape> shapes = {ModelShape(3, 1, 1), ModelShape(3, 2, 2), ModelShape(4, 2, 2)};
    std::uint64_t seed = 314;
    for (const auto& sh : shapes) {
        BetaClass beta;
        beta.bx.assign(static_cast<std::size_t>(sh.m), 0);
        beta.bz.assign(static_cast<std::size_t>(sh.n), 0);
        for (int i = 0; i < sh.m; ++i) beta.bx[static_cast<std::size_t>(i)] = (i * 2 - 1) % 3;
        for (int k = 0; k < sh.n; ++k) beta.bz[static_cast<std::size_t>(k)] = (k - 1) % 2;

        for (const auto& fp : enumerate_fixed_points(sh, Side::Primal)) {
            DegreeVector d;
            for (int j = 0; j < sh.r; ++j) d.push_back((j % 2 == 0) ? 1 : -1);
            Expr impl = restricted_factor({Model::GR, Form::DIRECT, fp, beta, d}, sh);
            Expr oracle = direct_restriction_oracle_gr(sh, fp, beta, d);
            for (std::uint32_t attempt = 0; attempt < 10; ++attempt) {
                Point p = random_point(sh, seed, attempt);
                CHECK(eval(impl, p) == eval(oracle, p));
            }
        }
        for (const auto& fp : enumerate_fixed_points(sh, Side::Dual)) {
            DegreeVector d;
            for (int j = 0; j < sh.s(); ++j) d.push_back((j % 2 == 0) ? 1 : 0);
            Expr impl = restricted_factor({Model::GR_HAT, Form::DIRECT, fp, beta, d}, sh);
            Expr oracle = direct_restriction_oracle_gr_hat(sh, fp, beta, d);
            for (std::uint32_t attempt = 0; attempt < 10; ++attempt) {
                Point p = random_point(sh, seed, attempt);
                CHECK(eval(impl, p) == eval(oracle, p));
            }
        }
    }
}

TEST_CASE("beta pairing validation and the positivity constraint") {
    ModelShape sh(3, 2, 1);
    BetaClass ok{{1, 0, 2}, {0, -1}, false};
    CHECK_NOTHROW(validate_beta(ok, sh));
    CHECK(satisfies_ample(ok));

    BetaClass bad{{1, 0}, {0, -1}, false};
    CHECK_THROWS_AS(validate_beta(bad, sh), ShapeMismatch);

    BetaClass not_ample{{0, 0, 0}, {1, 0}, false};
    CHECK_FALSE(satisfies_ample(not_ample));
}

TEST_CASE("fixed point validation") {
    ModelShape sh(4, 2, 2);
    CHECK_THROWS_AS(validate_fixed_point(primal_fp({1, 2, 3}), sh), ShapeMismatch);
    CHECK_THROWS_AS(validate_fixed_point(primal_fp({2, 2}), sh), ShapeMismatch);
    CHECK_THROWS_AS(validate_fixed_point(primal_fp({3, 5}), sh), ShapeMismatch);
    CHECK_NOTHROW(validate_fixed_point(primal_fp({2, 4}), sh));
}
