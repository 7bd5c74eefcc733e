#pragma once

#include "oro/orlp.hpp"

#include <optional>
#include <string>

namespace oro {

struct GridConfig {
    dvec K_values;     // sorted fractions in [0, 1]
    dvec R_values;     // sorted fractions in [0, 1)
    dvec M_values;     // sorted multipliers in [0, 1]
    double deviation_fraction = 0.10;
    int trials = 1000;
    uint64_t seed = 0;
    int random_n = 250; // random-family dimensions
    int random_j = 50;

    void validate() const;
};

/// An LP plus one deviation vector per inequality row (zeros elsewhere);
/// equality rows and bounds never carry uncertainty.
struct ProblemInstance {
    NominalLP lp;
    std::vector<dvec> deviations;
};

/// Random family: constraint coefficients uniform on (0, 0.5), unit
/// right-hand sides, nonnegative variables, deviations a fixed fraction of
/// each coefficient. Profit coefficients uniform on (0, 1) enter the
/// minimization form negated (otherwise the zero point is optimal and the
/// uncertain rows never bind). Identical seeds give identical instances.
ProblemInstance generate_random_lp(uint64_t seed, int n = 250, int J = 50,
                                   double deviation_fraction = 0.10);

/// Wraps a parsed MPS model: deviations are the given fraction of each
/// inequality coefficient magnitude.
ProblemInstance make_mps_instance(const NominalLP& lp, double deviation_fraction);

/// Per row: with beta_j nonzero deviations, protect k_j = K*beta_j of them
/// (clamped into [1, beta_j]; rows with K*beta_j < 1 stay nominal) and set
/// optimism r_j = R*k_j.
ORLPProblem build_budgets(const ProblemInstance& inst, double K, double R);

/// Mean nominal slack b_j - a_j'w over rows carrying uncertainty (over all
/// inequality rows when none do).
double avg_protection(const dvec& w, const ProblemInstance& inst);

/// Indices of the floor(r) largest |deviation_i * w_i|, ties to the lowest
/// index, returned ascending.
std::vector<int> select_protected_indices(const dvec& w, const RobustRow& row, double r);

/// Monte Carlo failure fraction under the worst-case symmetric draw:
/// unprotected coefficients move by +-deviation, protected ones by
/// +-M*deviation (pinned at nominal when M = 0); a trial fails as soon as
/// any uncertain row exceeds its right-hand side. Counter-based substreams
/// make the estimate a pure function of the seed.
double simulate_feasibility(const dvec& w, const ProblemInstance& inst,
                            const std::vector<std::vector<int>>& protected_sets, double M,
                            int trials, uint64_t seed);

struct GridRow {
    double K = 0.0;
    double R = 0.0;
    std::optional<double> M;
    std::optional<double> loss;
    std::optional<double> avg_protection;
    std::optional<double> p_infeasible;
    int dca_iterations = 0;
    std::string status;
};

/// Full protocol: per (K, R) cell solve the budgeted problem and record loss,
/// protection and iteration count; for R > 0 simulate at every multiplier M;
/// for R = 0 simulate the cross grid of (M, R') scenarios with protected sets
/// recomputed from the R = 0 solution. Solver failures are recorded in the
/// row status and the run continues.
std::vector<GridRow> run_grid(const ProblemInstance& inst, const GridConfig& grid);

/// Header K,R,M,loss,avg_protection,p_infeasible,dca_iterations,status with
/// empty fields where a value does not apply.
std::string grid_rows_to_csv(const std::vector<GridRow>& rows);

} // namespace oro
