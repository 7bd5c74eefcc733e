#include "oro/uncertainty.hpp"

#include "oro/norms.hpp"

#include <cmath>

namespace oro {

namespace {

// Applies diag(weights), i.e. maps w to the vector with entries a_i * w_i.
// This is the inverse of the scaling matrix inside the set definition.
dvec weighted(const UncertaintySet& set, const dvec& w) {
    if (!set.weights) return w;
    dvec out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = (*set.weights)[i] * w[i];
    return out;
}

} // namespace

void UncertaintySet::validate(size_t dim) const {
    if (scale < 0.0) throw DomainError("uncertainty set: scale must be nonnegative");
    if ((kind == SetKind::TopKDualBall) != k.has_value())
        throw DomainError("uncertainty set: order k is required exactly for TopKDualBall");
    if (weights) {
        if (weights->size() != dim) throw DomainError("uncertainty set: weights dimension mismatch");
        for (double a : *weights)
            if (!(a > 0.0)) throw DomainError("uncertainty set: weights must be strictly positive");
    }
    if (k && (!(*k >= 1.0) || !(*k <= static_cast<double>(dim))))
        throw DomainError("uncertainty set: order k outside [1, n]");
}

double OptimismPenalty::value(const dvec& d) const {
    switch (kind) {
    case PenaltyKind::None: return 0.0;
    case PenaltyKind::L1: return weight_l1 * lp_norm(d, Lp::One);
    case PenaltyKind::SquaredL2: {
        const double n2 = lp_norm(d, Lp::Two);
        return 0.5 * weight_sq * n2 * n2;
    }
    case PenaltyKind::ElasticNet: {
        const double n2 = lp_norm(d, Lp::Two);
        return weight_l1 * lp_norm(d, Lp::One) + 0.5 * weight_sq * n2 * n2;
    }
    }
    return 0.0;
}

double support_value(const UncertaintySet& set, const dvec& w) {
    set.validate(w.size());
    const dvec u = weighted(set, w);
    switch (set.kind) {
    case SetKind::L1Ball: return set.scale * lp_norm(u, Lp::Inf);
    case SetKind::L2Ball: return set.scale * lp_norm(u, Lp::Two);
    case SetKind::LInfBall: return set.scale * lp_norm(u, Lp::One);
    case SetKind::TopKDualBall: return set.scale * topk_norm(u, *set.k);
    }
    return 0.0;
}

dvec argsup(const UncertaintySet& set, const dvec& w) {
    set.validate(w.size());
    const dvec u = weighted(set, w);
    dvec pattern(w.size(), 0.0);
    switch (set.kind) {
    case SetKind::L1Ball: {
        int best = -1;
        double best_abs = 0.0;
        for (size_t i = 0; i < u.size(); ++i)
            if (std::fabs(u[i]) > best_abs) { best_abs = std::fabs(u[i]); best = static_cast<int>(i); }
        if (best >= 0) pattern[best] = set.scale * sign(u[best]);
        break;
    }
    case SetKind::L2Ball: {
        const double n2 = lp_norm(u, Lp::Two);
        if (n2 > 0.0)
            for (size_t i = 0; i < u.size(); ++i) pattern[i] = set.scale * u[i] / n2;
        break;
    }
    case SetKind::LInfBall:
        for (size_t i = 0; i < u.size(); ++i) pattern[i] = set.scale * sign(u[i]);
        break;
    case SetKind::TopKDualBall: {
        const dvec g = topk_subgradient(u, *set.k);
        for (size_t i = 0; i < u.size(); ++i) pattern[i] = set.scale * g[i];
        break;
    }
    }
    // d = W^{-1} * pattern, so the weighted point sits on the unit pattern.
    if (set.weights)
        for (size_t i = 0; i < pattern.size(); ++i) pattern[i] *= (*set.weights)[i];
    return pattern;
}

double oro_linear_value(const OroLinearTerm& term, const dvec& w) {
    if (term.optimism_penalty.kind != PenaltyKind::None)
        throw DomainError("oro_linear_value: penalty must be None (use the penalized form)");
    if (term.nominal.size() != w.size()) throw DomainError("oro_linear_value: dimension mismatch");
    return dot(w, term.nominal) + support_value(term.pessimistic, w) -
           support_value(term.optimistic, w);
}

double penalized_optimism_inf(const UncertaintySet& set, const OptimismPenalty& penalty,
                              const dvec& w) {
    set.validate(w.size());
    if (set.kind != SetKind::LInfBall)
        throw DomainError("penalized_optimism_inf: only LInfBall sets are supported");
    if (penalty.kind == PenaltyKind::None)
        throw DomainError("penalized_optimism_inf: penalty kind must be L1/SquaredL2/ElasticNet");

    const double alpha = penalty.kind == PenaltyKind::SquaredL2 ? 0.0 : penalty.weight_l1;
    const double beta = penalty.kind == PenaltyKind::L1 ? 0.0 : penalty.weight_sq;

    // Coordinate i solves  min  w_i*t + alpha*|t| + (beta/2)*t^2  over
    // |t| <= R_i; the minimizer is the soft-thresholded Newton point (the
    // bound endpoint when beta = 0), clamped into the interval.
    double total = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        const double r = set.weights ? set.scale * (*set.weights)[i] : set.scale;
        const double shrunk = std::max(std::fabs(w[i]) - alpha, 0.0);
        double t;
        if (beta > 0.0) t = -sign(w[i]) * std::min(shrunk / beta, r);
        else t = shrunk > 0.0 ? -sign(w[i]) * r : 0.0;
        total += w[i] * t + alpha * std::fabs(t) + 0.5 * beta * t * t;
    }
    return total;
}

namespace {

// Half-width of the bounding box of the set along coordinate i.
double box_radius(const UncertaintySet& set, size_t i) {
    const double a = set.weights ? (*set.weights)[i] : 1.0;
    return set.scale * a;
}

bool member(const UncertaintySet& set, const dvec& d, double tol) {
    dvec u(d.size());
    for (size_t i = 0; i < d.size(); ++i) u[i] = d[i] / (set.weights ? (*set.weights)[i] : 1.0);
    switch (set.kind) {
    case SetKind::L1Ball: return lp_norm(u, Lp::One) <= set.scale + tol;
    case SetKind::L2Ball: return lp_norm(u, Lp::Two) <= set.scale + tol;
    case SetKind::LInfBall: return lp_norm(u, Lp::Inf) <= set.scale + tol;
    case SetKind::TopKDualBall:
        return lp_norm(u, Lp::One) <= set.scale * *set.k + tol &&
               lp_norm(u, Lp::Inf) <= set.scale + tol;
    }
    return false;
}

} // namespace

double brute_force_sup_inf(const OroLinearTerm& term, const dvec& w, int grid_points_per_dim) {
    const size_t n = w.size();
    if (n > 3) throw DomainError("brute_force_sup_inf: refusing n > 3 (desk-scale oracle)");
    if (grid_points_per_dim < 11) throw DomainError("brute_force_sup_inf: grid too coarse");
    if (term.nominal.size() != n) throw DomainError("brute_force_sup_inf: dimension mismatch");
    term.optimistic.validate(n);
    term.pessimistic.validate(n);

    const double base = dot(w, term.nominal) + support_value(term.pessimistic, w);
    const double tol = 1e-12 * std::max(1.0, term.optimistic.scale);

    dvec d(n, 0.0);
    double best = kInf;
    std::vector<int> idx(n, 0);
    const int g = grid_points_per_dim;
    while (true) {
        for (size_t i = 0; i < n; ++i) {
            const double r = box_radius(term.optimistic, i);
            d[i] = -r + 2.0 * r * idx[i] / (g - 1);
        }
        if (member(term.optimistic, d, tol)) {
            const double val = dot(w, d) + term.optimism_penalty.value(d);
            if (val < best) best = val;
        }
        size_t carry = 0;
        while (carry < n && ++idx[carry] == g) idx[carry++] = 0;
        if (carry == n) break;
    }
    if (n == 0) best = 0.0;
    if (!std::isfinite(best)) {
        // degenerate set {0}: the zero point is always a member
        best = 0.0;
    }
    return base + best;
}

} // namespace oro
