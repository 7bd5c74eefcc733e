#pragma once

#include "oro/common.hpp"

#include <optional>

namespace oro {

enum class RegKind { ApproxL0, L12, CappedL1, MCP, SCAD };

/// One of the five sparsity-inducing regularizers, each a difference of two
/// convex pieces:
///   ApproxL0:  ||w||_1 - topk_norm(w, k)
///   L12:       ||w||_1 - ||w||_2
///   CappedL1:  ||w||_1 - sum_i [|w_i| - theta]^+            (theta > 0)
///   MCP:       lambda*||w||_1 - sum_i q_mcp(w_i)            (lambda, theta > 0)
///   SCAD:      lambda*||w||_1 - sum_i q_scad(w_i)           (lambda > 0, theta > 2)
struct Regularizer {
    RegKind kind = RegKind::L12;
    std::optional<double> k;      // ApproxL0 order
    std::optional<double> theta;  // CappedL1 / MCP / SCAD
    std::optional<double> lambda; // MCP / SCAD

    void validate(size_t dim) const;
};

struct RegDcParts {
    double convex_value;        // the kept convex piece
    double concave_value;       // the subtracted convex piece
    dvec concave_subgradient;   // subgradient of the subtracted piece at w
};

/// Value of the regularizer (always >= 0).
double reg_value(const Regularizer& spec, const dvec& w);

/// DC split with the subtracted part's subgradient; convex - concave equals
/// reg_value exactly and breakpoints use the left-branch derivative.
RegDcParts reg_dc_parts(const Regularizer& spec, const dvec& w);

/// Evaluates the sup-inf disturbance representation (pessimistic support
/// value plus optimistic infimum, penalized for CappedL1/MCP/SCAD) instead of
/// the closed form. Agrees with reg_value to roundoff.
double reg_via_robust_form(const Regularizer& spec, const dvec& w);

} // namespace oro
