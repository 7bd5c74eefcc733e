#pragma once

#include "oro/common.hpp"
#include "oro/regularizers.hpp"

#include <iosfwd>
#include <optional>

namespace oro {

struct Dataset {
    std::vector<dvec> X; // N samples by n features
    dvec y;              // targets; +-1 for classification

    int num_samples() const { return static_cast<int>(X.size()); }
    int num_features() const { return X.empty() ? 0 : static_cast<int>(X[0].size()); }
    void validate(bool classification) const;
};

/// Delimiter-separated values, one sample per line, target in the last
/// column; an optional header line is skipped.
Dataset parse_dataset(std::istream& in);
Dataset parse_dataset_file(const std::string& path);

struct LinearModel {
    dvec w;
    double b = 0.0;
    std::optional<double> aux;       // margin variable (gamma / epsilon)
    double objective = 0.0;
    int iterations = 0;              // outer DCA / alternation steps
    dvec objective_trace;            // one entry per outer iteration
    std::vector<int> excluded_indices; // trimmed regression: indices ignored
};

struct TrainerConfig {
    int dca_max_iters = 50;
    double dca_rel_tol = 1e-6;
    int inner_max_iters = 20000;
    double inner_tol = 1e-6;
    uint64_t seed = 0;
    // Box on model variables. The margin-loss LPs are unbounded on data a
    // sparse hyperplane separates (scaling (w, b, gamma) only improves the
    // objective), so both inner solvers work inside |x_i| <= var_box.
    double var_box = 100.0;
};

// ---------------------------------------------------------------------------
// Composite convex objective shared by every trainer's inner step:
//   (quad/2)*||w||^2 + l1_weight*||w||_1 + linear'x
//   + sum_g weight_g * max(0, max_e (a_e'x + c_e + n_e*||w||_2))
//   + topk.weight * topk(residual magnitudes, topk.k)
// Variables are x = [w, intercept, auxiliaries...]; quadratic, L1 and the
// ||w||_2 hinge terms act on the leading w block only.
// ---------------------------------------------------------------------------

struct AffineExpr {
    dvec coeffs;               // length dim
    double constant = 0.0;
    double wnorm_coeff = 0.0;  // multiplies ||w||_2 inside the expression
};

struct HingeGroup {
    double weight = 1.0;
    std::vector<AffineExpr> exprs;
};

struct TopkPenalty {
    double weight = 1.0;
    double k = 1.0;     // extended order in [0, #rows]
    bool squared = false; // residuals enter squared instead of as |.|
    std::vector<AffineExpr> rows;
};

struct ConvexObjective {
    int dim = 0;
    int w_dim = 0;
    double quad = 0.0;
    double l1_weight = 0.0;
    dvec linear; // length dim
    std::vector<HingeGroup> hinges;
    std::optional<TopkPenalty> topk;

    double value(const dvec& x) const;
    dvec subgradient(const dvec& x) const;
    /// True when the objective translates to an LP exactly.
    bool polyhedral() const;
};

struct SubsolveResult {
    dvec x;
    double objective = 0.0;
};

/// Minimizes the composite objective. Polyhedral problems are translated to
/// an LP (hinge slacks, L1/topk epigraphs) and solved exactly; objectives
/// with a quadratic term run a projected subgradient method with step
/// 1/(quad*t), doubling-window tail averages, and best-iterate tracking.
SubsolveResult convex_subsolve(const ConvexObjective& objective, const dvec& init,
                               const TrainerConfig& cfg);

// ---------------------------------------------------------------------------
// Trainers
// ---------------------------------------------------------------------------

/// Margin classifier with a non-convex regularizer handled by linearizing
/// its subtracted part:
///   min  nu*z*reg(w) + nu*gamma + (1/N) sum [ -y_i(w'X_i + b) - gamma ]^+
LinearModel train_nu_svc_oro(const Dataset& data, const std::optional<Regularizer>& reg, double z,
                             double nu, const TrainerConfig& cfg = {});

/// Regression counterpart with the eps-insensitive loss:
///   min  nu*z*reg(w) + C*( nu*eps + (1/N) sum [ |y_i - (w'X_i+b)| - eps ]^+ )
LinearModel train_nu_svr_oro(const Dataset& data, const std::optional<Regularizer>& reg, double z,
                             double nu, double C, const TrainerConfig& cfg = {});

enum class LossKind { Absolute, Squared };

/// Trimmed-loss regression: with residual scores z_i = |res_i| or res_i^2,
///   min  0.5*||w||^2 + (C/N) * ( topk(z, nu*N) - topk(z, mu*N) ),
/// ignoring the mu*N largest errors. Requires 0 <= mu < nu. Both terms are
/// the unscaled largest-k sums (topk_norm), not the 1/k-averaged cvar_norm;
/// the eps-insensitive loss minimized over its margin equals exactly the
/// unscaled sum.
LinearModel train_trimmed_regression(const Dataset& data, double nu, double mu, double C,
                                     LossKind loss, const TrainerConfig& cfg = {});

/// Classifier trained against optimistically denoised inputs: alternates the
/// closed-form disturbance d_i = r_i*y_i*w/||w|| with a hinge-loss solve on
/// the shifted points.
LinearModel train_tsvc(const Dataset& data, double C, const dvec& optimistic_radii,
                       const TrainerConfig& cfg = {});

/// Worst-case counterpart (convex, single solve):
///   min  C sum [ -y_i(w'X_i+b) + r_i*||w||_2 + 1 ]^+ + 0.5*||w||^2
LinearModel train_robust_csvm(const Dataset& data, double C, const dvec& pessimistic_radii,
                              const TrainerConfig& cfg = {});

struct ProbeResult {
    double c_hat = 0.0;
    double discrepancy = 0.0;
};

/// Searches for the plain-hinge cost c_hat whose solution matches the robust
/// one; with the same norm inside and outside the hinge the discrepancy
/// should vanish. Golden-section on log(c_hat), best evaluated point wins.
ProbeResult redundancy_probe(const Dataset& data, double C, double z_p,
                             const TrainerConfig& cfg = {});

} // namespace oro
