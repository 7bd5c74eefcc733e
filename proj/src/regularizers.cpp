#include "oro/regularizers.hpp"

#include "oro/norms.hpp"
#include "oro/uncertainty.hpp"

#include <cmath>

namespace oro {

void Regularizer::validate(size_t dim) const {
    switch (kind) {
    case RegKind::ApproxL0:
        if (!k) throw DomainError("ApproxL0 requires an order k");
        if (!(*k >= 1.0) || !(*k <= static_cast<double>(dim)))
            throw DomainError("ApproxL0 order k outside [1, n]");
        break;
    case RegKind::L12:
        break;
    case RegKind::CappedL1:
        if (!theta || !(*theta > 0.0)) throw DomainError("CappedL1 requires theta > 0");
        break;
    case RegKind::MCP:
        if (!lambda || !(*lambda > 0.0)) throw DomainError("MCP requires lambda > 0");
        if (!theta || !(*theta > 0.0)) throw DomainError("MCP requires theta > 0");
        break;
    case RegKind::SCAD:
        if (!lambda || !(*lambda > 0.0)) throw DomainError("SCAD requires lambda > 0");
        if (!theta || !(*theta > 2.0)) throw DomainError("SCAD requires theta > 2");
        break;
    }
}

namespace {

double mcp_concave_term(double x, double lambda, double theta) {
    const double a = std::fabs(x);
    if (a <= theta * lambda) return x * x / (2.0 * theta);
    return lambda * a - theta * lambda * lambda / 2.0;
}

double scad_concave_term(double x, double lambda, double theta) {
    const double a = std::fabs(x);
    if (a <= lambda) return 0.0;
    if (a <= theta * lambda) {
        const double d = a - lambda;
        return d * d / (2.0 * (theta - 1.0));
    }
    return lambda * a - (theta + 1.0) * lambda * lambda / 2.0;
}

} // namespace

RegDcParts reg_dc_parts(const Regularizer& spec, const dvec& w) {
    spec.validate(w.size());
    RegDcParts out;
    out.concave_subgradient.assign(w.size(), 0.0);
    switch (spec.kind) {
    case RegKind::ApproxL0:
        out.convex_value = lp_norm(w, Lp::One);
        out.concave_value = topk_norm(w, *spec.k);
        out.concave_subgradient = topk_subgradient(w, *spec.k);
        break;
    case RegKind::L12: {
        out.convex_value = lp_norm(w, Lp::One);
        const double n2 = lp_norm(w, Lp::Two);
        out.concave_value = n2;
        if (n2 > 0.0)
            for (size_t i = 0; i < w.size(); ++i) out.concave_subgradient[i] = w[i] / n2;
        break;
    }
    case RegKind::CappedL1: {
        const double th = *spec.theta;
        out.convex_value = lp_norm(w, Lp::One);
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            s += std::max(std::fabs(w[i]) - th, 0.0);
            out.concave_subgradient[i] = std::fabs(w[i]) > th ? sign(w[i]) : 0.0;
        }
        out.concave_value = s;
        break;
    }
    case RegKind::MCP: {
        const double la = *spec.lambda, th = *spec.theta;
        out.convex_value = la * lp_norm(w, Lp::One);
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            s += mcp_concave_term(w[i], la, th);
            out.concave_subgradient[i] = sign(w[i]) * std::min(std::fabs(w[i]) / th, la);
        }
        out.concave_value = s;
        break;
    }
    case RegKind::SCAD: {
        const double la = *spec.lambda, th = *spec.theta;
        out.convex_value = la * lp_norm(w, Lp::One);
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            const double a = std::fabs(w[i]);
            s += scad_concave_term(w[i], la, th);
            double der;
            if (a <= la) der = 0.0;
            else if (a <= th * la) der = (a - la) / (th - 1.0);
            else der = la;
            out.concave_subgradient[i] = sign(w[i]) * der;
        }
        out.concave_value = s;
        break;
    }
    }
    return out;
}

double reg_value(const Regularizer& spec, const dvec& w) {
    const RegDcParts parts = reg_dc_parts(spec, w);
    return parts.convex_value - parts.concave_value;
}

double reg_via_robust_form(const Regularizer& spec, const dvec& w) {
    spec.validate(w.size());
    UncertaintySet pess{SetKind::LInfBall, 1.0, std::nullopt, std::nullopt};
    switch (spec.kind) {
    case RegKind::ApproxL0: {
        UncertaintySet opt{SetKind::TopKDualBall, 1.0, spec.k, std::nullopt};
        // inf over a symmetric set of w'd is minus its support value
        return support_value(pess, w) - support_value(opt, w);
    }
    case RegKind::L12: {
        UncertaintySet opt{SetKind::L2Ball, 1.0, std::nullopt, std::nullopt};
        return support_value(pess, w) - support_value(opt, w);
    }
    case RegKind::CappedL1: {
        UncertaintySet opt{SetKind::LInfBall, 1.0, std::nullopt, std::nullopt};
        OptimismPenalty pen{PenaltyKind::L1, *spec.theta, 0.0};
        return support_value(pess, w) + penalized_optimism_inf(opt, pen, w);
    }
    case RegKind::MCP: {
        pess.scale = *spec.lambda;
        UncertaintySet opt{SetKind::LInfBall, *spec.lambda, std::nullopt, std::nullopt};
        OptimismPenalty pen{PenaltyKind::SquaredL2, 0.0, *spec.theta};
        return support_value(pess, w) + penalized_optimism_inf(opt, pen, w);
    }
    case RegKind::SCAD: {
        pess.scale = *spec.lambda;
        UncertaintySet opt{SetKind::LInfBall, *spec.lambda, std::nullopt, std::nullopt};
        OptimismPenalty pen{PenaltyKind::ElasticNet, *spec.lambda, *spec.theta - 1.0};
        return support_value(pess, w) + penalized_optimism_inf(opt, pen, w);
    }
    }
    return 0.0;
}

} // namespace oro
