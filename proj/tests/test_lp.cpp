#include "oro/lp.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace oro;

TEST_CASE("simplex solves tiny hand problems") {
    SUBCASE("min -x s.t. x <= 1, x >= 0") {
        NominalLP lp;
        lp.add_col(-1.0, 0.0, kInf);
        lp.add_ineq({{0, 1.0}}, 1.0);
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        CHECK(sol.w[0] == doctest::Approx(1.0));
        CHECK(sol.objective == doctest::Approx(-1.0));
    }
    SUBCASE("min x s.t. x <= -1, x >= 0 is infeasible") {
        NominalLP lp;
        lp.add_col(1.0, 0.0, kInf);
        lp.add_ineq({{0, 1.0}}, -1.0);
        CHECK(solve_lp(lp).status == LPStatus::Infeasible);
    }
    SUBCASE("min -x-y s.t. x+y <= 1") {
        NominalLP lp;
        lp.add_col(-1.0, 0.0, kInf);
        lp.add_col(-1.0, 0.0, kInf);
        lp.add_ineq({{0, 1.0}, {1, 1.0}}, 1.0);
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(-1.0));
        // deterministic vertex of the optimal face
        const auto again = solve_lp(lp);
        CHECK(sol.w == again.w);
        CHECK(sol.iterations == again.iterations);
    }
    SUBCASE("unbounded") {
        NominalLP lp;
        lp.add_col(-1.0, 0.0, kInf);
        lp.add_col(0.0, 0.0, 1.0);
        lp.add_ineq({{1, 1.0}}, 0.5);
        CHECK(solve_lp(lp).status == LPStatus::Unbounded);
    }
    SUBCASE("equalities and free variables") {
        NominalLP lp;
        lp.add_col(1.0, -kInf, kInf);
        lp.add_col(2.0, 0.0, 5.0);
        lp.add_eq({{0, 1.0}, {1, 1.0}}, 2.0);
        lp.add_ineq({{0, -1.0}}, 3.0); // x >= -3
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        // put as much as possible on the cheap free variable
        CHECK(sol.w[0] == doctest::Approx(2.0));
        CHECK(sol.w[1] == doctest::Approx(0.0));
        CHECK(sol.objective == doctest::Approx(2.0));
    }
    SUBCASE("upper-bounded variables flip to their bound") {
        NominalLP lp;
        lp.add_col(-1.0, 0.0, 2.0);
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        CHECK(sol.w[0] == doctest::Approx(2.0));
    }
}

TEST_CASE("iteration limit raises a dedicated error") {
    NominalLP lp;
    for (int i = 0; i < 6; ++i) lp.add_col(-1.0, 0.0, kInf);
    for (int r = 0; r < 6; ++r) {
        sprow row;
        for (int i = 0; i < 6; ++i) row.emplace_back(i, 1.0 + 0.1 * ((r + i) % 3));
        lp.add_ineq(std::move(row), 1.0 + 0.2 * r);
    }
    CHECK_THROWS_AS(solve_lp(lp, {1e-7, 1e-7, 1}), IterationLimitError);
}

namespace {

NominalLP random_box_lp(Rng& rng, int n, int J) {
    NominalLP lp;
    for (int i = 0; i < n; ++i)
        lp.add_col(rng.uniform(-1.0, 1.0), 0.0, rng.uniform(0.5, 3.0));
    for (int r = 0; r < J; ++r) {
        sprow row;
        for (int i = 0; i < n; ++i) {
            const double a = rng.uniform(-1.0, 1.0);
            if (std::fabs(a) > 0.15) row.emplace_back(i, a);
        }
        lp.add_ineq(std::move(row), rng.uniform(0.2, 2.0)); // rhs > 0 keeps w = 0 feasible
    }
    return lp;
}

} // namespace

TEST_CASE("random instances match the vertex-enumeration oracle") {
    Rng rng(321);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(3)); // up to 4 here; acceptance goes to 8
        const int J = 1 + static_cast<int>(rng.below(5));
        const NominalLP lp = random_box_lp(rng, n, J);
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);
        const double oracle = test::vertex_enumeration_min(lp);
        CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("optimal solutions satisfy complementary slackness") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(4));
        const int J = 1 + static_cast<int>(rng.below(5));
        const NominalLP lp = random_box_lp(rng, n, J);
        const auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPStatus::Optimal);

        for (int r = 0; r < lp.num_ineq(); ++r) {
            const double slack = lp.ineq_rhs[r] - dot(lp.ineq[r], sol.w);
            CHECK(sol.ineq_duals[r] <= 1e-9);              // sign for a minimization
            CHECK(std::fabs(sol.ineq_duals[r] * slack) <= 1e-6);
        }
        for (int j = 0; j < n; ++j) {
            const double d = sol.reduced_costs[j];
            if (sol.w[j] > lp.lower[j] + 1e-7 && sol.w[j] < lp.upper[j] - 1e-7)
                CHECK(std::fabs(d) <= 1e-6);
            else if (sol.w[j] <= lp.lower[j] + 1e-7)
                CHECK(d >= -1e-6);
            else
                CHECK(d <= 1e-6);
        }
    }
}

TEST_CASE("solves are deterministic") {
    Rng rng(7);
    const NominalLP lp = random_box_lp(rng, 5, 6);
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp);
    CHECK(a.w == b.w);
    CHECK(a.objective == b.objective);
    CHECK(a.iterations == b.iterations);
}
