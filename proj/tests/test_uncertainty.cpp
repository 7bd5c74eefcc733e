#include "oro/uncertainty.hpp"

#include "oro/norms.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace oro;

namespace {

UncertaintySet ball(SetKind kind, double scale) { return {kind, scale, std::nullopt, std::nullopt}; }

UncertaintySet topk_ball(double scale, double k) { return {SetKind::TopKDualBall, scale, k, std::nullopt}; }

double set_norm_of(const UncertaintySet& set, const dvec& d) {
    dvec u(d.size());
    for (size_t i = 0; i < d.size(); ++i) u[i] = d[i] / (set.weights ? (*set.weights)[i] : 1.0);
    switch (set.kind) {
    case SetKind::L1Ball: return lp_norm(u, Lp::One);
    case SetKind::L2Ball: return lp_norm(u, Lp::Two);
    case SetKind::LInfBall: return lp_norm(u, Lp::Inf);
    case SetKind::TopKDualBall:
        return std::max(lp_norm(u, Lp::One) / *set.k, lp_norm(u, Lp::Inf));
    }
    return 0.0;
}

} // namespace

TEST_CASE("support values match the closed forms") {
    CHECK(support_value(ball(SetKind::LInfBall, 0.5), {1, -2}) == doctest::Approx(1.5));
    CHECK(support_value(ball(SetKind::L2Ball, 1.0), {3, 4}) == doctest::Approx(5.0));
    CHECK(support_value(ball(SetKind::L1Ball, 2.0), {3, -4}) == doctest::Approx(8.0));
    CHECK(support_value(topk_ball(1.0, 2.0), {3, -1, 2}) == doctest::Approx(5.0));
    for (SetKind kind : {SetKind::L1Ball, SetKind::L2Ball, SetKind::LInfBall})
        CHECK(support_value(ball(kind, 0.0), {1, 2, 3}) == 0.0);
}

TEST_CASE("weighted sets scale the argument coordinatewise") {
    UncertaintySet set = ball(SetKind::LInfBall, 1.0);
    set.weights = dvec{2.0, 0.5};
    // sup of d'w over { ||diag(1/2, 2) d||_inf <= 1 } = |2*w1| + |0.5*w2|
    CHECK(support_value(set, {1.0, 4.0}) == doctest::Approx(4.0));
    const dvec d = argsup(set, {1.0, 4.0});
    CHECK(d[0] == doctest::Approx(2.0));
    CHECK(d[1] == doctest::Approx(0.5));
}

TEST_CASE("argsup attains the support value inside the set") {
    CHECK(argsup(ball(SetKind::LInfBall, 1.0), {3, -4}) == dvec{1, -1});
    const dvec d = argsup(ball(SetKind::L2Ball, 2.0), {3, 4});
    CHECK(d[0] == doctest::Approx(1.2));
    CHECK(d[1] == doctest::Approx(1.6));
    CHECK(argsup(ball(SetKind::L2Ball, 2.0), {0, 0}) == dvec{0, 0});

    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        UncertaintySet set;
        const int pick = static_cast<int>(rng.below(4));
        set.kind = static_cast<SetKind>(pick);
        set.scale = rng.uniform(0.0, 2.0);
        if (set.kind == SetKind::TopKDualBall) set.k = 1.0 + rng.uniform() * (n - 1);
        if (rng.below(2) == 0) set.weights = test::random_vec(rng, n, 0.2, 2.0);
        const dvec w = test::random_vec(rng, n, -3.0, 3.0);

        const double sup = support_value(set, w);
        const dvec d = argsup(set, w);
        CHECK(dot(d, w) == doctest::Approx(sup).epsilon(1e-10));
        if (set.scale > 0.0) CHECK(set_norm_of(set, d) <= set.scale + 1e-12);

        const double a = rng.uniform(0.1, 4.0);
        dvec aw(w.size());
        for (size_t i = 0; i < w.size(); ++i) aw[i] = a * w[i];
        CHECK(support_value(set, aw) == doctest::Approx(a * sup).epsilon(1e-12));
    }
}

TEST_CASE("reduced linear term") {
    OroLinearTerm same;
    same.nominal = {0, 0};
    same.pessimistic = ball(SetKind::L2Ball, 1.5);
    same.optimistic = ball(SetKind::L2Ball, 1.5);
    CHECK(oro_linear_value(same, {2, -1}) == doctest::Approx(dot(same.nominal, dvec{2, -1})));

    OroLinearTerm t;
    t.nominal = {1, 1};
    t.pessimistic = ball(SetKind::LInfBall, 1.0);
    t.optimistic = ball(SetKind::L2Ball, 1.0);
    CHECK(oro_linear_value(t, {3, 4}) == doctest::Approx(7.0 + 7.0 - 5.0));

    t.pessimistic.scale = 0.0;
    t.optimistic.scale = 0.0;
    CHECK(oro_linear_value(t, {3, 4}) == doctest::Approx(7.0));
}

TEST_CASE("penalized optimism closed forms") {
    const UncertaintySet box1 = ball(SetKind::LInfBall, 1.0);
    const OptimismPenalty l1{PenaltyKind::L1, 1.0, 0.0};
    CHECK(penalized_optimism_inf(box1, l1, {2.0, 0.5}) == doctest::Approx(-1.0));

    const UncertaintySet box2 = ball(SetKind::LInfBall, 2.0);
    const OptimismPenalty sq{PenaltyKind::SquaredL2, 0.0, 1.0};
    CHECK(penalized_optimism_inf(box2, sq, {1.0}) == doctest::Approx(-0.5));

    CHECK(penalized_optimism_inf(box1, l1, {0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(penalized_optimism_inf(ball(SetKind::L2Ball, 1.0), l1, {1.0}), DomainError);
}

TEST_CASE("brute-force oracle validates the reductions") {
    SUBCASE("degenerate sets give the nominal value") {
        OroLinearTerm t;
        t.nominal = {2.5};
        t.pessimistic = ball(SetKind::LInfBall, 0.0);
        t.optimistic = ball(SetKind::LInfBall, 0.0);
        CHECK(brute_force_sup_inf(t, {3.0}, 11) == doctest::Approx(7.5));
    }
    SUBCASE("reduced form at n = 2") {
        OroLinearTerm t;
        t.nominal = {1, 1};
        t.pessimistic = ball(SetKind::LInfBall, 1.0);
        t.optimistic = ball(SetKind::L2Ball, 1.0);
        const dvec w{3, 4};
        CHECK(brute_force_sup_inf(t, w, 201) ==
              doctest::Approx(oro_linear_value(t, w)).epsilon(0.012));
    }
    SUBCASE("penalized form at n = 2") {
        OroLinearTerm t;
        t.nominal = {0, 0};
        t.pessimistic = ball(SetKind::LInfBall, 0.0);
        t.optimistic = ball(SetKind::LInfBall, 1.0);
        t.optimism_penalty = {PenaltyKind::L1, 1.0, 0.0};
        const dvec w{2, 0.5};
        const double expect = penalized_optimism_inf(t.optimistic, t.optimism_penalty, w);
        CHECK(brute_force_sup_inf(t, w, 201) == doctest::Approx(expect).epsilon(0.05));
    }
    SUBCASE("every penalty kind agrees with the grid") {
        Rng rng(88);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 1 + static_cast<int>(rng.below(2));
            OroLinearTerm t;
            t.nominal = dvec(n, 0.0);
            t.pessimistic = ball(SetKind::LInfBall, 0.0);
            t.optimistic = ball(SetKind::LInfBall, rng.uniform(0.5, 1.5));
            switch (rng.below(3)) {
            case 0: t.optimism_penalty = {PenaltyKind::L1, rng.uniform(0.2, 1.5), 0.0}; break;
            case 1: t.optimism_penalty = {PenaltyKind::SquaredL2, 0.0, rng.uniform(0.3, 2.0)}; break;
            default:
                t.optimism_penalty = {PenaltyKind::ElasticNet, rng.uniform(0.2, 1.0),
                                      rng.uniform(0.3, 2.0)};
            }
            const dvec w = test::random_vec(rng, n, -2.5, 2.5);
            const double expect = penalized_optimism_inf(t.optimistic, t.optimism_penalty, w);
            const double grid = brute_force_sup_inf(t, w, 201);
            const double step = 2.0 * t.optimistic.scale / 200.0;
            const double lip = lp_norm(w, Lp::One) + n * (t.optimism_penalty.weight_l1 +
                                                          t.optimism_penalty.weight_sq *
                                                              t.optimistic.scale);
            CHECK(grid >= expect - 1e-9);
            CHECK(grid <= expect + 2.0 * step * lip + 1e-9);
        }
    }
    SUBCASE("desk-scale guardrails") {
        OroLinearTerm t;
        t.nominal = dvec(4, 0.0);
        t.pessimistic = ball(SetKind::LInfBall, 1.0);
        t.optimistic = ball(SetKind::LInfBall, 1.0);
        CHECK_THROWS_AS(brute_force_sup_inf(t, dvec(4, 1.0), 21), DomainError);
        OroLinearTerm t1;
        t1.nominal = {0.0};
        t1.pessimistic = ball(SetKind::LInfBall, 1.0);
        t1.optimistic = ball(SetKind::LInfBall, 1.0);
        CHECK_THROWS_AS(brute_force_sup_inf(t1, {1.0}, 5), DomainError);
    }
}

TEST_CASE("random reduced-vs-grid agreement") {
    Rng rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(2));
        OroLinearTerm t;
        t.nominal = test::random_vec(rng, n);
        const auto random_ball = [&]() {
            UncertaintySet s;
            s.kind = static_cast<SetKind>(rng.below(4));
            s.scale = rng.uniform(0.0, 1.5);
            if (s.kind == SetKind::TopKDualBall) s.k = 1.0 + rng.uniform() * (n - 1);
            return s;
        };
        t.pessimistic = random_ball();
        t.optimistic = random_ball();
        const dvec w = test::random_vec(rng, n, -2.0, 2.0);
        const double exact = oro_linear_value(t, w);
        const double grid = brute_force_sup_inf(t, w, 201);
        const double step = 2.0 * t.optimistic.scale / 200.0;
        const double bound = 2.0 * step * (lp_norm(w, Lp::One) + 1.0) + 1e-9;
        CHECK(grid >= exact - 1e-9);
        CHECK(grid <= exact + bound);
    }
}
