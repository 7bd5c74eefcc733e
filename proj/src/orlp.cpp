#include "oro/orlp.hpp"

#include "oro/norms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oro {

std::vector<int> RobustRow::support() const {
    std::vector<int> idx;
    for (size_t i = 0; i < deviations.size(); ++i)
        if (deviations[i] > 0.0) idx.push_back(static_cast<int>(i));
    return idx;
}

void ORLPProblem::validate() const {
    nominal.validate();
    std::set<int> seen;
    for (const auto& row : robust_rows) {
        if (row.row < 0 || row.row >= nominal.num_ineq())
            throw DomainError("orlp: robust row index out of range");
        if (!seen.insert(row.row).second) throw DomainError("orlp: duplicate robust row index");
        if (row.deviations.size() != nominal.c.size())
            throw DomainError("orlp: deviation vector dimension mismatch");
        for (double d : row.deviations)
            if (d < 0.0 || !std::isfinite(d)) throw DomainError("orlp: deviations must be >= 0");
        const auto supp = row.support();
        if (row.budget_k == 0.0) {
            if (row.optimism_r != 0.0) throw DomainError("orlp: r > 0 requires k > 0");
            continue;
        }
        if (!(row.budget_k >= 1.0) || row.budget_k > static_cast<double>(supp.size()))
            throw DomainError("orlp: budget k outside [1, support size]");
        if (row.optimism_r < 0.0 || row.optimism_r >= row.budget_k)
            throw DomainError("orlp: optimism r must satisfy 0 <= r < k");
    }
}

const char* to_string(DcaStatus s) {
    switch (s) {
    case DcaStatus::Converged: return "converged";
    case DcaStatus::IterLimit: return "iterlimit";
    case DcaStatus::SubproblemInfeasible: return "infeasible";
    }
    return "?";
}

namespace {

dvec support_products(const dvec& w, const RobustRow& row, const std::vector<int>& supp) {
    dvec y(supp.size());
    for (size_t t = 0; t < supp.size(); ++t) y[t] = row.deviations[supp[t]] * w[supp[t]];
    return y;
}

} // namespace

double robust_constraint_value(const dvec& w, const RobustRow& row, const sprow& a_j) {
    if (w.size() != row.deviations.size())
        throw DomainError("robust_constraint_value: dimension mismatch");
    double val = dot(a_j, w);
    if (row.budget_k == 0.0) return val;
    const auto supp = row.support();
    const dvec y = support_products(w, row, supp);
    val += topk_norm_ext(y, row.budget_k);
    if (row.optimism_r > 0.0) val -= topk_norm_ext(y, row.optimism_r);
    return val;
}

NominalLP build_convex_subproblem(const ORLPProblem& problem, const std::vector<dvec>& delta) {
    if (delta.size() != problem.robust_rows.size())
        throw DomainError("build_convex_subproblem: one delta per robust row required");
    NominalLP lp = problem.nominal;
    const int n = lp.num_cols();

    for (size_t jr = 0; jr < problem.robust_rows.size(); ++jr) {
        const RobustRow& row = problem.robust_rows[jr];
        if (row.budget_k == 0.0) continue;
        const auto supp = row.support();
        const dvec& d = delta[jr];
        if (static_cast<int>(d.size()) != n)
            throw DomainError("build_convex_subproblem: delta dimension mismatch");

        const std::string tag = std::to_string(row.row);
        const int zeta = lp.add_col(0.0, 0.0, kInf, "zeta" + tag);
        std::vector<int> s_cols(supp.size());
        for (size_t t = 0; t < supp.size(); ++t)
            s_cols[t] = lp.add_col(0.0, 0.0, kInf, "s" + tag + "_" + std::to_string(supp[t]));

        // merged structural coefficients a_j + delta_j
        dvec coeff(n, 0.0);
        for (const auto& [col, v] : problem.nominal.ineq[row.row]) coeff[col] += v;
        for (int col = 0; col < n; ++col) coeff[col] += d[col];

        sprow merged;
        for (int col = 0; col < n; ++col)
            if (coeff[col] != 0.0) merged.emplace_back(col, coeff[col]);
        merged.emplace_back(zeta, row.budget_k);
        for (int sc : s_cols) merged.emplace_back(sc, 1.0);
        lp.ineq[row.row] = std::move(merged);

        for (size_t t = 0; t < supp.size(); ++t) {
            const double dev = row.deviations[supp[t]];
            // a sign-pinned variable needs only the side that can bind:
            // with w_i >= 0 the negative row sits below s_ij >= 0 forever
            const bool can_be_pos = problem.nominal.upper[supp[t]] > 0.0;
            const bool can_be_neg = problem.nominal.lower[supp[t]] < 0.0;
            if (can_be_pos)
                lp.add_ineq({{supp[t], dev}, {zeta, -1.0}, {s_cols[t], -1.0}}, 0.0,
                            "ep" + tag + "_" + std::to_string(supp[t]));
            if (can_be_neg)
                lp.add_ineq({{supp[t], -dev}, {zeta, -1.0}, {s_cols[t], -1.0}}, 0.0,
                            "en" + tag + "_" + std::to_string(supp[t]));
        }
    }
    return lp;
}

LPSolution solve_bertsimas_sim(const ORLPProblem& problem, const SimplexConfig& cfg) {
    problem.validate();
    std::vector<dvec> zeros(problem.robust_rows.size(), dvec(problem.nominal.c.size(), 0.0));
    LPSolution sol = solve_lp(build_convex_subproblem(problem, zeros), cfg);
    if (sol.status == LPStatus::Optimal) sol.w.resize(problem.nominal.c.size());
    return sol;
}

namespace {

std::pair<OrlpResult, DcaTrace> dca_run(const ORLPProblem& problem, const DcaConfig& cfg,
                                        const std::vector<dvec>& initial_fixed) {
    const int n = problem.nominal.num_cols();
    const size_t nrows = problem.robust_rows.size();

    OrlpResult res;
    DcaTrace trace;

    std::vector<dvec> zeros(nrows, dvec(n, 0.0));
    LPSolution sol = solve_lp(build_convex_subproblem(problem, initial_fixed), cfg.lp);
    if (sol.status != LPStatus::Optimal) {
        res.status = DcaStatus::SubproblemInfeasible;
        trace.status = res.status;
        trace.iterates.push_back({0, 0.0, zeros, sol.status});
        return {res, trace};
    }
    dvec w(sol.w.begin(), sol.w.begin() + n);
    double objective = sol.objective;
    trace.iterates.push_back({0, objective, zeros, sol.status});

    const bool any_optimism =
        std::any_of(problem.robust_rows.begin(), problem.robust_rows.end(),
                    [](const RobustRow& r) { return r.optimism_r > 0.0; });
    if (!any_optimism) {
        res.status = DcaStatus::Converged;
        res.w = w;
        res.objective = objective;
        res.iterations = 0;
        trace.status = res.status;
        return {res, trace};
    }

    res.status = DcaStatus::IterLimit;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        // Best-case selection at the current iterate: the support-function
        // maximizer of w'd over {||W d||_1 <= r, ||W d||_inf <= 1}.
        std::vector<dvec> delta_hat(nrows, dvec(n, 0.0));
        std::vector<dvec> fixed(nrows, dvec(n, 0.0));
        for (size_t jr = 0; jr < nrows; ++jr) {
            const RobustRow& row = problem.robust_rows[jr];
            if (row.optimism_r <= 0.0) continue;
            const auto supp = row.support();
            const dvec y = support_products(w, row, supp);
            const dvec g = topk_subgradient_ext(y, row.optimism_r);
            for (size_t t = 0; t < supp.size(); ++t) {
                delta_hat[jr][supp[t]] = row.deviations[supp[t]] * g[t];
                fixed[jr][supp[t]] = -delta_hat[jr][supp[t]];
            }
        }

        sol = solve_lp(build_convex_subproblem(problem, fixed), cfg.lp);
        if (sol.status != LPStatus::Optimal) {
            res.status = DcaStatus::SubproblemInfeasible;
            trace.iterates.push_back({it, objective, delta_hat, sol.status});
            break;
        }
        w.assign(sol.w.begin(), sol.w.begin() + n);
        const double next = sol.objective;
        log_debug("dca iteration " + std::to_string(it) + ": objective " + fmt_double(next));
        trace.iterates.push_back({it, next, delta_hat, sol.status});
        res.iterations = it;
        const bool converged = objective - next < cfg.rel_tol * std::max(1.0, std::fabs(objective));
        objective = next;
        if (converged) {
            res.status = DcaStatus::Converged;
            break;
        }
    }

    res.w = w;
    res.objective = objective;
    trace.status = res.status;
    return {res, trace};
}

} // namespace

std::pair<OrlpResult, DcaTrace> dca_solve(const ORLPProblem& problem, const DcaConfig& cfg) {
    problem.validate();
    const int n = problem.nominal.num_cols();
    const size_t nrows = problem.robust_rows.size();

    auto best = dca_run(problem, cfg, std::vector<dvec>(nrows, dvec(n, 0.0)));
    if (cfg.multi_start <= 0) return best;

    Rng rng(cfg.seed);
    for (int s = 0; s < cfg.multi_start; ++s) {
        // random point of each optimistic set, mapped back through the
        // deviation scaling
        std::vector<dvec> fixed(nrows, dvec(n, 0.0));
        for (size_t jr = 0; jr < nrows; ++jr) {
            const RobustRow& row = problem.robust_rows[jr];
            if (row.optimism_r <= 0.0) continue;
            const auto supp = row.support();
            dvec u(supp.size());
            for (double& x : u) x = rng.uniform(-1.0, 1.0);
            const double n1 = lp_norm(u, Lp::One);
            if (n1 > row.optimism_r)
                for (double& x : u) x *= row.optimism_r / n1;
            for (size_t t = 0; t < supp.size(); ++t)
                fixed[jr][supp[t]] = -row.deviations[supp[t]] * u[t];
        }
        auto cand = dca_run(problem, cfg, fixed);
        if (cand.first.status == DcaStatus::SubproblemInfeasible) continue;
        if (best.first.status == DcaStatus::SubproblemInfeasible ||
            cand.first.objective < best.first.objective)
            best = std::move(cand);
    }
    return best;
}

} // namespace oro
