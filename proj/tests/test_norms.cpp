#include "oro/norms.hpp"

#include "oro/lp.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace oro;

TEST_CASE("topk_norm basics") {
    CHECK(topk_norm({3, -1, 2}, 2) == doctest::Approx(5.0));
    CHECK(topk_norm({0, 0, 0}, 2) == 0.0);
    CHECK(topk_norm({3, -1, 2}, 1.5) == doctest::Approx(4.0)); // 3 + 0.5*2
    CHECK(topk_norm({3, -1, 2}, 1) == doctest::Approx(3.0));
    CHECK(topk_norm({3, -1, 2}, 3) == doctest::Approx(6.0));
    CHECK_THROWS_AS(topk_norm({1, 2}, 0.5), DomainError);
    CHECK_THROWS_AS(topk_norm({1, 2}, 2.5), DomainError);
    CHECK_THROWS_AS(topk_norm({}, 1), DomainError);
}

TEST_CASE("topk variational form matches the sort definition") {
    auto [v1, z1] = topk_norm_variational({3, -1, 2}, 2);
    CHECK(v1 == doctest::Approx(5.0));
    CHECK(z1 == doctest::Approx(2.0));

    auto [v2, z2] = topk_norm_variational({0}, 1);
    CHECK(v2 == 0.0);
    CHECK(z2 == 0.0);

    auto [v3, z3] = topk_norm_variational({4, 4, 4}, 2);
    CHECK(v3 == doctest::Approx(8.0));
    CHECK(z3 == doctest::Approx(4.0));

    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(12));
        const dvec v = test::random_vec(rng, n, -5.0, 5.0);
        const double k = 1.0 + rng.uniform() * (n - 1);
        const auto [val, zeta] = topk_norm_variational(v, k);
        CHECK(val == doctest::Approx(topk_norm(v, k)).epsilon(1e-12));
        CHECK(zeta >= 0.0);
    }
}

TEST_CASE("topk dual norm") {
    CHECK(topk_dual_norm({3, -1, 2}, 2) == doctest::Approx(3.0));
    CHECK(topk_dual_norm({0, 0}, 1) == 0.0);
    CHECK(topk_dual_norm({1, 1, 1, 1}, 2) == doctest::Approx(2.0));
}

TEST_CASE("topk subgradient") {
    CHECK(topk_subgradient({3, -1, 2}, 2) == dvec{1, 0, 1});
    CHECK(topk_subgradient({1, 1}, 1) == dvec{1, 0}); // lowest-index tie
    CHECK(topk_subgradient({0, 0}, 1) == dvec{0, 0}); // sign(0) = 0

    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(10));
        const dvec v = test::random_vec(rng, n, -3.0, 3.0);
        const double k = 1.0 + rng.uniform() * (n - 1);
        const dvec g = topk_subgradient(v, k);
        CHECK(dot(g, v) == doctest::Approx(topk_norm(v, k)).epsilon(1e-12));
        CHECK(topk_dual_norm(g, k) <= 1.0 + 1e-12);
    }
}

TEST_CASE("lp and cvar norms") {
    CHECK(lp_norm({3, 4}, Lp::Two) == doctest::Approx(5.0));
    CHECK(lp_norm({3, -4}, Lp::One) == doctest::Approx(7.0));
    CHECK(lp_norm({3, -4}, Lp::Inf) == doctest::Approx(4.0));
    CHECK(cvar_norm({3, -1, 2}, 2) == doctest::Approx(2.5));
    CHECK(cvar_norm({0, 0}, 2) == 0.0);
    CHECK(cvar_norm({6}, 1) == doctest::Approx(6.0));
}

TEST_CASE("norm axioms and interpolation") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(8));
        const dvec u = test::random_vec(rng, n, -2.0, 2.0);
        const dvec v = test::random_vec(rng, n, -2.0, 2.0);
        const double k = 1.0 + rng.uniform() * (n - 1);
        const double a = rng.uniform(-3.0, 3.0);

        CHECK(topk_norm(u, k) >= 0.0);
        dvec au(u.size());
        for (size_t i = 0; i < u.size(); ++i) au[i] = a * u[i];
        CHECK(topk_norm(au, k) == doctest::Approx(std::fabs(a) * topk_norm(u, k)).epsilon(1e-12));
        dvec sum(u.size());
        for (size_t i = 0; i < u.size(); ++i) sum[i] = u[i] + v[i];
        CHECK(topk_norm(sum, k) <= topk_norm(u, k) + topk_norm(v, k) + 1e-12);

        CHECK(topk_norm(u, 1) == doctest::Approx(lp_norm(u, Lp::Inf)));
        CHECK(topk_norm(u, n) == doctest::Approx(lp_norm(u, Lp::One)));

        const double k2 = k + rng.uniform() * (n - k);
        CHECK(topk_norm(u, k) <= topk_norm(u, k2) + 1e-12);
    }
}

namespace {

// sup { v'd : ||d||_1 <= k, ||d||_inf <= 1 } via the simplex solver
double dual_ball_support_lp(const dvec& v, double k) {
    const int n = static_cast<int>(v.size());
    NominalLP lp;
    for (int i = 0; i < n; ++i) lp.add_col(-v[i], -1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const int t = lp.add_col(0.0, 0.0, kInf);
        lp.add_ineq({{i, 1.0}, {t, -1.0}}, 0.0);
        lp.add_ineq({{i, -1.0}, {t, -1.0}}, 0.0);
    }
    sprow budget;
    for (int i = 0; i < n; ++i) budget.emplace_back(n + i, 1.0);
    lp.add_ineq(std::move(budget), k);
    const LPSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    return -sol.objective;
}

} // namespace

TEST_CASE("duality against the polyhedral ball") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const dvec v = test::random_vec(rng, n, -4.0, 4.0);
        const double k = 1.0 + rng.uniform() * (n - 1);
        CHECK(dual_ball_support_lp(v, k) == doctest::Approx(topk_norm(v, k)).epsilon(1e-8));
    }
}
