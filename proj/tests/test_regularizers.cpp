#include "oro/regularizers.hpp"

#include "oro/norms.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace oro;

namespace {

Regularizer make(RegKind kind, double k = 0, double theta = 0, double lambda = 0) {
    Regularizer r;
    r.kind = kind;
    if (kind == RegKind::ApproxL0) r.k = k;
    if (kind == RegKind::CappedL1 || kind == RegKind::MCP || kind == RegKind::SCAD) r.theta = theta;
    if (kind == RegKind::MCP || kind == RegKind::SCAD) r.lambda = lambda;
    return r;
}

Regularizer random_spec(Rng& rng, int n) {
    switch (rng.below(5)) {
    case 0: return make(RegKind::ApproxL0, 1.0 + rng.uniform() * (n - 1));
    case 1: return make(RegKind::L12);
    case 2: return make(RegKind::CappedL1, 0, rng.uniform(0.2, 2.0));
    case 3: return make(RegKind::MCP, 0, rng.uniform(0.3, 3.0), rng.uniform(0.2, 2.0));
    default: return make(RegKind::SCAD, 0, 2.0 + rng.uniform(0.1, 3.0), rng.uniform(0.2, 2.0));
    }
}

} // namespace

TEST_CASE("closed-form values") {
    CHECK(reg_value(make(RegKind::L12), {3, 4}) == doctest::Approx(2.0));
    CHECK(reg_value(make(RegKind::CappedL1, 0, 1.0), {2, 0.5}) == doctest::Approx(1.5));
    for (const auto& spec :
         {make(RegKind::ApproxL0, 1), make(RegKind::L12), make(RegKind::CappedL1, 0, 1.0),
          make(RegKind::MCP, 0, 2.0, 1.0), make(RegKind::SCAD, 0, 3.0, 1.0)})
        CHECK(reg_value(spec, {0, 0}) == 0.0);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(reg_value(make(RegKind::SCAD, 0, 1.5, 1.0), {1.0}), DomainError);
    CHECK_THROWS_AS(reg_value(make(RegKind::MCP, 0, 1.0, 0.0), {1.0}), DomainError);
    CHECK_THROWS_AS(reg_value(make(RegKind::CappedL1, 0, 0.0), {1.0}), DomainError);
    CHECK_THROWS_AS(reg_value(make(RegKind::ApproxL0, 5.0), {1.0, 2.0}), DomainError);
}

TEST_CASE("dc split examples") {
    const auto l12 = reg_dc_parts(make(RegKind::L12), {3, 4});
    CHECK(l12.convex_value == doctest::Approx(7.0));
    CHECK(l12.concave_value == doctest::Approx(5.0));
    CHECK(l12.concave_subgradient[0] == doctest::Approx(0.6));
    CHECK(l12.concave_subgradient[1] == doctest::Approx(0.8));

    const auto capped = reg_dc_parts(make(RegKind::CappedL1, 0, 1.0), {2, 0.5});
    CHECK(capped.convex_value == doctest::Approx(2.5));
    CHECK(capped.concave_value == doctest::Approx(1.0));
    CHECK(capped.concave_subgradient == dvec{1, 0});

    const auto mcp = reg_dc_parts(make(RegKind::MCP, 0, 2.0, 1.0), {3});
    CHECK(mcp.convex_value == doctest::Approx(3.0));
    CHECK(mcp.concave_value == doctest::Approx(2.0));
    CHECK(mcp.concave_subgradient == dvec{1});
}

TEST_CASE("robust representation equals the closed form") {
    CHECK(reg_via_robust_form(make(RegKind::CappedL1, 0, 1.0), {2, 0.5}) == doctest::Approx(1.5));
    CHECK(reg_via_robust_form(make(RegKind::SCAD, 0, 3.0, 1.0), {0.5}) == doctest::Approx(0.5));

    Rng rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(10));
        const Regularizer spec = random_spec(rng, n);
        const dvec w = test::random_vec(rng, n, -4.0, 4.0);
        CHECK(reg_via_robust_form(spec, w) == doctest::Approx(reg_value(spec, w)).epsilon(1e-10));
    }
}

TEST_CASE("dc consistency, nonnegativity and subgradient validity") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const Regularizer spec = random_spec(rng, n);
        const dvec w = test::random_vec(rng, n, -3.0, 3.0);
        const dvec w2 = test::random_vec(rng, n, -3.0, 3.0);

        const auto parts = reg_dc_parts(spec, w);
        CHECK(parts.convex_value - parts.concave_value ==
              doctest::Approx(reg_value(spec, w)).epsilon(1e-12));
        CHECK(reg_value(spec, w) >= -1e-12);

        // the subtracted part is convex: g(w2) >= g(w) + s'(w2 - w)
        const auto parts2 = reg_dc_parts(spec, w2);
        double lin = parts.concave_value;
        for (int i = 0; i < n; ++i) lin += parts.concave_subgradient[i] * (w2[i] - w[i]);
        CHECK(parts2.concave_value >= lin - 1e-10);
    }
}

TEST_CASE("sparsity signature of the approximate cardinality penalty") {
    const Regularizer spec = make(RegKind::ApproxL0, 2.0);
    CHECK(reg_value(spec, {3, 0, 0}) == doctest::Approx(0.0));
    CHECK(reg_value(spec, {3, -1, 0}) == doctest::Approx(0.0));
    CHECK(reg_value(spec, {3, -1, 0.5}) > 1e-9);

    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const int k = 1 + static_cast<int>(rng.below(n));
        dvec w(n, 0.0);
        const int nnz = static_cast<int>(rng.below(n + 1));
        for (int i = 0; i < nnz; ++i) w[i] = rng.uniform(0.5, 2.0) * (rng.below(2) ? 1 : -1);
        const double val = reg_value(make(RegKind::ApproxL0, k), w);
        if (nnz <= k) CHECK(val == doctest::Approx(0.0));
        else CHECK(val > 1e-9);
    }
}
