#pragma once

#include "oro/common.hpp"

#include <optional>

namespace oro {

enum class SetKind { L1Ball, L2Ball, LInfBall, TopKDualBall };

/// Convex set described through its support function: the set of
/// disturbances d with ||W d|| <= scale in the stated norm, where
/// W = diag(1/weights_i) when coordinate weights are present (identity
/// otherwise). TopKDualBall uses the dual of the largest-k norm, i.e.
/// ||W d||_1 <= scale*k and ||W d||_inf <= scale.
///
/// Any positive-homogeneous convex nonnegative g is the support function of
/// the convex set { d : d'x <= g(x) for all x }; only the four norm-ball
/// instances above are materialized, since every formulation in this toolkit
/// uses one of them.
struct UncertaintySet {
    SetKind kind = SetKind::LInfBall;
    double scale = 0.0;
    std::optional<double> k;       // TopKDualBall order
    std::optional<dvec> weights;   // strictly positive when present

    void validate(size_t dim) const;
};

enum class PenaltyKind { None, L1, SquaredL2, ElasticNet };

/// Convex cost charged on optimistic disturbances:
///   L1 -> weight_l1*||d||_1, SquaredL2 -> (weight_sq/2)*||d||_2^2,
///   ElasticNet -> both terms.
struct OptimismPenalty {
    PenaltyKind kind = PenaltyKind::None;
    double weight_l1 = 0.0;
    double weight_sq = 0.0;

    double value(const dvec& d) const;
};

/// One uncertain linear term: nominal data plus a pessimistic and an
/// optimistic disturbance set (optionally with a penalty on optimism).
struct OroLinearTerm {
    dvec nominal;
    UncertaintySet pessimistic;
    UncertaintySet optimistic;
    OptimismPenalty optimism_penalty;
};

/// sup over the set of d'w (closed form per kind).
double support_value(const UncertaintySet& set, const dvec& w);

/// A maximizer of d'w over the set. Deterministic: ties go to the lowest
/// index and the zero vector is returned whenever w (after weighting)
/// vanishes.
dvec argsup(const UncertaintySet& set, const dvec& w);

/// w'X + sup_P d'w - sup_O d'w, the reduced value of the inf-sup linear term.
/// Requires penalty kind None.
double oro_linear_value(const OroLinearTerm& term, const dvec& w);

/// inf over the LInf-ball set of w'd + penalty(d), coordinatewise closed
/// form. Only LInfBall sets are supported (the combinations the closed forms
/// require); anything else throws DomainError.
double penalized_optimism_inf(const UncertaintySet& set, const OptimismPenalty& penalty,
                              const dvec& w);

/// Desk-scale verification oracle: grid minimum over optimistic disturbances
/// of w'(X+d) + penalty(d) + sup_P, refusing dimensions above 3.
double brute_force_sup_inf(const OroLinearTerm& term, const dvec& w, int grid_points_per_dim);

} // namespace oro
