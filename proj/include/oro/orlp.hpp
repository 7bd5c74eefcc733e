#pragma once

#include "oro/lp.hpp"

namespace oro {

/// Robustness data for one inequality row: maximal coefficient deviations
/// (zero marks a certain coefficient), a protection budget k over the
/// nonzero-deviation support, and an optimism budget r < k (r = 0 disables
/// optimism; k = r = 0 leaves the row nominal).
struct RobustRow {
    int row = 0;
    dvec deviations;
    double budget_k = 0.0;
    double optimism_r = 0.0;

    std::vector<int> support() const; // indices with deviations > 0
};

struct ORLPProblem {
    NominalLP nominal;
    std::vector<RobustRow> robust_rows;

    void validate() const;
};

enum class DcaStatus { Converged, IterLimit, SubproblemInfeasible };

const char* to_string(DcaStatus s);

struct DcaIterate {
    int iteration = 0;
    double objective = 0.0;
    std::vector<dvec> delta_hat; // argsup selection per robust row
    LPStatus subproblem_status = LPStatus::Optimal;
};

struct DcaTrace {
    std::vector<DcaIterate> iterates;
    DcaStatus status = DcaStatus::Converged;
};

struct OrlpResult {
    DcaStatus status = DcaStatus::Converged;
    dvec w;
    double objective = 0.0;
    int iterations = 0; // re-solves after the initial (optimism-free) solve
};

struct DcaConfig {
    int max_iters = 50;
    double rel_tol = 1e-8;
    SimplexConfig lp{1e-9, 1e-9, 0};
    // Extra passes started from random best-case selections; the best final
    // objective wins. Off by default: the plain scheme starts optimism-free.
    int multi_start = 0;
    uint64_t seed = 0;
};

/// w'a_j + topk(y, k_j) - topk(y, r_j) with y_i = deviation_i * w_i on the
/// support; the r = 0 case drops the last term.
double robust_constraint_value(const dvec& w, const RobustRow& row, const sprow& a_j);

/// The convex restriction with the optimistic disturbances held fixed:
/// per robust row the protection term is expanded through its epigraph
///   w'a_j + k_j*zeta_j + sum_i s_ij + w'delta_j <= b_j,
///   s_ij >= +-dev_ij*w_i - zeta_j,  zeta_j, s_ij >= 0,
/// and everything else is copied through. delta entries must lie in the
/// row's optimistic set; all-zero delta gives the worst-case-only LP.
NominalLP build_convex_subproblem(const ORLPProblem& problem, const std::vector<dvec>& delta);

/// Worst-case-only baseline: one solve of the subproblem with delta = 0.
LPSolution solve_bertsimas_sim(const ORLPProblem& problem, const SimplexConfig& cfg = {1e-9, 1e-9, 0});

/// Alternating scheme: solve with no optimism, then repeatedly pick the
/// best-case disturbance for the current iterate in closed form and re-solve
/// with it held fixed, until the relative objective decrease drops below
/// rel_tol. The objective never increases across iterations and the final
/// iterate satisfies every robust constraint.
std::pair<OrlpResult, DcaTrace> dca_solve(const ORLPProblem& problem, const DcaConfig& cfg = {});

} // namespace oro
