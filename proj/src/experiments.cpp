#include "oro/experiments.hpp"

#include "oro/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oro {

void GridConfig::validate() const {
    auto check_sorted = [](const dvec& v, double lo, double hi, const char* name) {
        if (v.empty()) throw DomainError(std::string("grid: ") + name + " must be nonempty");
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] < lo || v[i] >= hi + 1e-15)
                throw DomainError(std::string("grid: ") + name + " entry out of range");
            if (i > 0 && v[i] < v[i - 1])
                throw DomainError(std::string("grid: ") + name + " must be sorted");
        }
    };
    check_sorted(K_values, 0.0, 1.0, "K_values");
    check_sorted(R_values, 0.0, 1.0 - 1e-12, "R_values");
    check_sorted(M_values, 0.0, 1.0, "M_values");
    if (trials < 1) throw DomainError("grid: trials must be >= 1");
    if (deviation_fraction < 0.0) throw DomainError("grid: deviation_fraction must be >= 0");
    if (random_n < 1 || random_j < 1) throw DomainError("grid: random dimensions must be >= 1");
}

ProblemInstance generate_random_lp(uint64_t seed, int n, int J, double deviation_fraction) {
    if (n < 1 || J < 1) throw DomainError("generate_random_lp: dimensions must be >= 1");
    Rng rng(seed);
    ProblemInstance inst;
    NominalLP& lp = inst.lp;
    for (int j = 0; j < n; ++j) lp.add_col(0.0, 0.0, kInf, "x" + std::to_string(j));
    for (int r = 0; r < J; ++r) {
        sprow row;
        dvec dev(n, 0.0);
        for (int j = 0; j < n; ++j) {
            const double a = rng.uniform(0.0, 0.5);
            row.emplace_back(j, a);
            dev[j] = deviation_fraction * a;
        }
        lp.add_ineq(std::move(row), 1.0, "r" + std::to_string(r));
        inst.deviations.push_back(std::move(dev));
    }
    // Profit coefficients drawn on (0, 1) enter the minimization form negated;
    // with nonnegative costs the all-zero point would be optimal and the
    // budgeted rows could never bind.
    for (int j = 0; j < n; ++j) lp.c[j] = -rng.uniform(0.0, 1.0);
    return inst;
}

ProblemInstance make_mps_instance(const NominalLP& lp, double deviation_fraction) {
    ProblemInstance inst;
    inst.lp = lp;
    inst.deviations.assign(lp.num_ineq(), dvec(lp.num_cols(), 0.0));
    for (int r = 0; r < lp.num_ineq(); ++r)
        for (const auto& [j, v] : lp.ineq[r])
            inst.deviations[r][j] = deviation_fraction * std::fabs(v);
    return inst;
}

ORLPProblem build_budgets(const ProblemInstance& inst, double K, double R) {
    if (K < 0.0 || K > 1.0) throw DomainError("build_budgets: K must lie in [0, 1]");
    if (R < 0.0 || R >= 1.0) throw DomainError("build_budgets: R must lie in [0, 1)");
    ORLPProblem problem;
    problem.nominal = inst.lp;
    for (int r = 0; r < inst.lp.num_ineq(); ++r) {
        const dvec& dev = inst.deviations[r];
        int beta = 0;
        for (double d : dev)
            if (d > 0.0) ++beta;
        const double k_raw = K * beta;
        if (k_raw < 1.0) continue; // below the smallest representable budget
        RobustRow row;
        row.row = r;
        row.deviations = dev;
        row.budget_k = std::min(k_raw, static_cast<double>(beta));
        row.optimism_r = R * row.budget_k;
        problem.robust_rows.push_back(std::move(row));
    }
    return problem;
}

double avg_protection(const dvec& w, const ProblemInstance& inst) {
    double total = 0.0;
    int count = 0;
    for (int r = 0; r < inst.lp.num_ineq(); ++r) {
        const bool uncertain =
            std::any_of(inst.deviations[r].begin(), inst.deviations[r].end(),
                        [](double d) { return d > 0.0; });
        if (!uncertain) continue;
        total += inst.lp.ineq_rhs[r] - dot(inst.lp.ineq[r], w);
        ++count;
    }
    if (count == 0) {
        for (int r = 0; r < inst.lp.num_ineq(); ++r) {
            total += inst.lp.ineq_rhs[r] - dot(inst.lp.ineq[r], w);
            ++count;
        }
    }
    return count > 0 ? total / count : 0.0;
}

std::vector<int> select_protected_indices(const dvec& w, const RobustRow& row, double r) {
    std::vector<int> out;
    const int take = static_cast<int>(std::floor(r));
    if (take <= 0) return out;
    const auto supp = row.support();
    dvec products(supp.size());
    for (size_t t = 0; t < supp.size(); ++t)
        products[t] = std::fabs(row.deviations[supp[t]] * w[supp[t]]);
    const auto order = abs_order(products);
    for (int t = 0; t < take && t < static_cast<int>(order.size()); ++t)
        out.push_back(supp[order[t]]);
    std::sort(out.begin(), out.end());
    return out;
}

double simulate_feasibility(const dvec& w, const ProblemInstance& inst,
                            const std::vector<std::vector<int>>& protected_sets, double M,
                            int trials, uint64_t seed) {
    if (M < 0.0 || M > 1.0) throw DomainError("simulate_feasibility: M must lie in [0, 1]");
    if (trials < 1) throw DomainError("simulate_feasibility: trials must be >= 1");
    if (protected_sets.size() != inst.deviations.size())
        throw DomainError("simulate_feasibility: one protected set per inequality row required");

    struct RowSim {
        int row;
        double nominal_value;
        std::vector<int> indices;    // uncertain coordinate ids (for substreams)
        dvec magnitudes;             // effective +-magnitude per coordinate
    };
    std::vector<RowSim> rows;
    for (int r = 0; r < inst.lp.num_ineq(); ++r) {
        const dvec& dev = inst.deviations[r];
        RowSim sim;
        sim.row = r;
        sim.nominal_value = dot(inst.lp.ineq[r], w);
        const auto& prot = protected_sets[r];
        for (size_t i = 0; i < dev.size(); ++i) {
            if (dev[i] <= 0.0) continue;
            const bool is_prot =
                std::binary_search(prot.begin(), prot.end(), static_cast<int>(i));
            const double scale = is_prot ? M : 1.0;
            if (scale == 0.0) continue; // pinned at nominal
            sim.indices.push_back(static_cast<int>(i));
            sim.magnitudes.push_back(scale * dev[i] * w[i]);
        }
        if (!sim.indices.empty() ||
            std::any_of(dev.begin(), dev.end(), [](double d) { return d > 0.0; }))
            rows.push_back(std::move(sim));
    }

    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        bool failed = false;
        for (const auto& sim : rows) {
            double val = sim.nominal_value;
            for (size_t u = 0; u < sim.indices.size(); ++u) {
                const uint64_t bit =
                    counter_hash(seed, static_cast<uint64_t>(t),
                                 static_cast<uint64_t>(sim.row),
                                 static_cast<uint64_t>(sim.indices[u])) &
                    1u;
                val += bit != 0 ? sim.magnitudes[u] : -sim.magnitudes[u];
            }
            if (val > inst.lp.ineq_rhs[sim.row] + 1e-9) {
                failed = true;
                break;
            }
        }
        if (failed) ++failures;
    }
    return static_cast<double>(failures) / trials;
}

namespace {

std::vector<std::vector<int>> protection_for(const ORLPProblem& problem, const dvec& w,
                                             int num_rows,
                                             const std::optional<double>& override_R) {
    std::vector<std::vector<int>> sets(num_rows);
    for (const auto& row : problem.robust_rows) {
        const double r = override_R ? *override_R * row.budget_k : row.optimism_r;
        sets[row.row] = select_protected_indices(w, row, r);
    }
    return sets;
}

} // namespace

std::vector<GridRow> run_grid(const ProblemInstance& inst, const GridConfig& grid) {
    grid.validate();
    std::vector<GridRow> rows;
    const int J = inst.lp.num_ineq();

    for (size_t iK = 0; iK < grid.K_values.size(); ++iK) {
        const double K = grid.K_values[iK];
        for (size_t iR = 0; iR < grid.R_values.size(); ++iR) {
            const double R = grid.R_values[iR];
            GridRow solve_row;
            solve_row.K = K;
            solve_row.R = R;

            ORLPProblem problem;
            OrlpResult res;
            try {
                problem = build_budgets(inst, K, R);
                auto [r, trace] = dca_solve(problem);
                res = std::move(r);
            } catch (const std::exception& ex) {
                solve_row.status = std::string("error: ") + ex.what();
                rows.push_back(std::move(solve_row));
                log_error("grid cell K=" + fmt_double(K) + " R=" + fmt_double(R) +
                          " failed: " + ex.what());
                continue;
            }
            solve_row.status = to_string(res.status);
            solve_row.dca_iterations = res.iterations;
            if (res.status == DcaStatus::SubproblemInfeasible) {
                rows.push_back(std::move(solve_row));
                continue;
            }
            solve_row.loss = res.objective;
            solve_row.avg_protection = avg_protection(res.w, inst);
            rows.push_back(solve_row);

            if (R != 0.0) {
                const auto prot = protection_for(problem, res.w, J, std::nullopt);
                for (size_t iM = 0; iM < grid.M_values.size(); ++iM) {
                    const double M = grid.M_values[iM];
                    const uint64_t cell = counter_hash(grid.seed, 1, (iK << 20) | iR, iM);
                    GridRow sim = solve_row;
                    sim.M = M;
                    sim.p_infeasible =
                        simulate_feasibility(res.w, inst, prot, M, grid.trials, cell);
                    sim.status = "sim";
                    rows.push_back(std::move(sim));
                }
            } else {
                // scenarios where optimistic circumstances arise even though
                // the solve assumed none: recompute protection per R'
                for (size_t iR2 = 0; iR2 < grid.R_values.size(); ++iR2) {
                    const double R2 = grid.R_values[iR2];
                    const auto prot = protection_for(problem, res.w, J, R2);
                    for (size_t iM = 0; iM < grid.M_values.size(); ++iM) {
                        const double M = grid.M_values[iM];
                        const uint64_t cell =
                            counter_hash(grid.seed, 2, (iK << 40) | (iR2 << 20) | iR, iM);
                        GridRow sim = solve_row;
                        sim.R = R2;
                        sim.M = M;
                        sim.p_infeasible =
                            simulate_feasibility(res.w, inst, prot, M, grid.trials, cell);
                        sim.status = "sim-from-r0";
                        rows.push_back(std::move(sim));
                    }
                }
            }
        }
    }
    return rows;
}

std::string grid_rows_to_csv(const std::vector<GridRow>& rows) {
    std::ostringstream out;
    out << "K,R,M,loss,avg_protection,p_infeasible,dca_iterations,status\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); };
    for (const auto& r : rows) {
        out << fmt_double(r.K) << ',' << fmt_double(r.R) << ',' << opt(r.M) << ',' << opt(r.loss)
            << ',' << opt(r.avg_protection) << ',' << opt(r.p_infeasible) << ','
            << r.dca_iterations << ',' << r.status << '\n';
    }
    return out.str();
}

} // namespace oro
