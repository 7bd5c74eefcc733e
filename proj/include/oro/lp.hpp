#pragma once

#include "oro/common.hpp"

#include <string>
#include <vector>

namespace oro {

/// Linear program
///   min c'w  s.t.  a_j'w <= b_j,  e_q'w = d_q,  l <= w <= u.
/// Rows are stored sparsely; bound entries may be +-inf.
struct NominalLP {
    dvec c;
    std::vector<sprow> ineq;
    dvec ineq_rhs;
    std::vector<sprow> eq;
    dvec eq_rhs;
    dvec lower;
    dvec upper;
    std::vector<std::string> col_names;
    std::vector<std::string> ineq_names;
    std::vector<std::string> eq_names;
    std::vector<std::string> warnings; // parser notes (ignored integrality, ...)

    int num_cols() const { return static_cast<int>(c.size()); }
    int num_ineq() const { return static_cast<int>(ineq.size()); }
    int num_eq() const { return static_cast<int>(eq.size()); }

    /// Appends a fresh column and returns its index.
    int add_col(double cost, double lo, double hi, const std::string& name = "");
    void add_ineq(sprow row, double rhs, const std::string& name = "");
    void add_eq(sprow row, double rhs, const std::string& name = "");

    /// Throws DomainError if dimensions or bounds are inconsistent.
    void validate() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LPStatus s);

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    dvec w;                  // structural values, set when Optimal
    double objective = 0.0;  // c'w when Optimal
    int iterations = 0;      // total simplex pivots (both phases)
    dvec ineq_duals;         // y_j <= 0, one per inequality row
    dvec eq_duals;
    dvec reduced_costs;      // per structural column
};

struct SimplexConfig {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    int max_iters = 0; // 0 means 50*(rows+cols)
};

/// Raised when the pivot budget is exhausted before reaching a verdict;
/// deliberately distinct from the Unbounded status.
class IterationLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Deterministic two-phase revised simplex with bounded variables. Dantzig
/// pricing, switching permanently to Bland's rule after 3*(rows+cols)
/// consecutive non-improving pivots.
LPSolution solve_lp(const NominalLP& lp, const SimplexConfig& cfg = {});

} // namespace oro
