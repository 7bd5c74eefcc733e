#include "oro/ml.hpp"

#include "oro/lp.hpp"
#include "oro/norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace oro {

void Dataset::validate(bool classification) const {
    if (X.empty()) throw DomainError("dataset: at least one sample required");
    if (y.size() != X.size()) throw DomainError("dataset: target count mismatch");
    const size_t n = X[0].size();
    for (const auto& row : X) {
        if (row.size() != n) throw DomainError("dataset: ragged feature rows");
        for (double v : row)
            if (!std::isfinite(v)) throw DomainError("dataset: non-finite feature");
    }
    for (double t : y) {
        if (!std::isfinite(t)) throw DomainError("dataset: non-finite target");
        if (classification && t != 1.0 && t != -1.0)
            throw DomainError("dataset: classification labels must be -1 or +1");
    }
}

Dataset parse_dataset(std::istream& in) {
    Dataset d;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream ss(line);
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        dvec vals;
        bool numeric = true;
        for (const auto& tok : toks) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == nullptr || *end != '\0') { numeric = false; break; }
            vals.push_back(v);
        }
        if (!numeric) {
            if (first) { first = false; continue; } // header
            throw DomainError("dataset: non-numeric field on line " + std::to_string(lineno));
        }
        first = false;
        if (vals.size() < 2) throw DomainError("dataset: need features plus target on line " +
                                               std::to_string(lineno));
        d.y.push_back(vals.back());
        vals.pop_back();
        d.X.push_back(std::move(vals));
    }
    return d;
}

Dataset parse_dataset_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open data file: " + path);
    return parse_dataset(f);
}

// ---------------------------------------------------------------------------
// Composite objective
// ---------------------------------------------------------------------------

namespace {

double wnorm(const dvec& x, int w_dim) {
    double s = 0.0;
    for (int i = 0; i < w_dim; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double expr_value(const AffineExpr& e, const dvec& x, double wn) {
    return dot(e.coeffs, x) + e.constant + e.wnorm_coeff * wn;
}

} // namespace

double ConvexObjective::value(const dvec& x) const {
    const double wn = wnorm(x, w_dim);
    double total = 0.5 * quad * wn * wn;
    for (int i = 0; i < w_dim; ++i) total += l1_weight * std::fabs(x[i]);
    total += dot(linear, x);
    for (const auto& g : hinges) {
        double m = 0.0;
        for (const auto& e : g.exprs) m = std::max(m, expr_value(e, x, wn));
        total += g.weight * m;
    }
    if (topk) {
        dvec res(topk->rows.size());
        for (size_t i = 0; i < res.size(); ++i) {
            const double a = expr_value(topk->rows[i], x, wn);
            res[i] = topk->squared ? a * a : std::fabs(a);
        }
        total += topk->weight * topk_norm_ext(res, topk->k);
    }
    return total;
}

dvec ConvexObjective::subgradient(const dvec& x) const {
    const double wn = wnorm(x, w_dim);
    dvec g(dim, 0.0);
    for (int i = 0; i < w_dim; ++i) g[i] += quad * x[i] + l1_weight * sign(x[i]);
    for (int i = 0; i < dim; ++i) g[i] += linear[i];

    auto add_expr_grad = [&](const AffineExpr& e, double factor) {
        for (int i = 0; i < dim; ++i) g[i] += factor * e.coeffs[i];
        if (e.wnorm_coeff != 0.0 && wn > 0.0)
            for (int i = 0; i < w_dim; ++i) g[i] += factor * e.wnorm_coeff * x[i] / wn;
    };

    for (const auto& hg : hinges) {
        double m = 0.0;
        int arg = -1;
        for (size_t e = 0; e < hg.exprs.size(); ++e) {
            const double v = expr_value(hg.exprs[e], x, wn);
            if (v > m) { m = v; arg = static_cast<int>(e); }
        }
        if (arg >= 0) add_expr_grad(hg.exprs[arg], hg.weight);
    }
    if (topk) {
        dvec res(topk->rows.size());
        dvec raw(topk->rows.size());
        for (size_t i = 0; i < res.size(); ++i) {
            raw[i] = expr_value(topk->rows[i], x, wn);
            res[i] = topk->squared ? raw[i] * raw[i] : std::fabs(raw[i]);
        }
        const dvec alpha = topk_subgradient_ext(res, topk->k);
        for (size_t i = 0; i < res.size(); ++i) {
            if (alpha[i] == 0.0) continue;
            const double dres = topk->squared ? 2.0 * raw[i] : sign(raw[i]);
            add_expr_grad(topk->rows[i], topk->weight * alpha[i] * dres);
        }
    }
    return g;
}

bool ConvexObjective::polyhedral() const {
    if (quad != 0.0) return false;
    for (const auto& hg : hinges)
        for (const auto& e : hg.exprs)
            if (e.wnorm_coeff != 0.0) return false;
    if (topk) {
        if (topk->squared) return false;
        for (const auto& e : topk->rows)
            if (e.wnorm_coeff != 0.0) return false;
    }
    return true;
}

namespace {

SubsolveResult subsolve_lp(const ConvexObjective& f, const TrainerConfig& cfg) {
    NominalLP lp;
    for (int i = 0; i < f.dim; ++i)
        lp.add_col(f.linear[i], -cfg.var_box, cfg.var_box, "x" + std::to_string(i));
    if (f.l1_weight != 0.0) {
        for (int i = 0; i < f.w_dim; ++i) {
            const int u = lp.add_col(f.l1_weight, 0.0, kInf, "u" + std::to_string(i));
            lp.add_ineq({{i, 1.0}, {u, -1.0}}, 0.0);
            lp.add_ineq({{i, -1.0}, {u, -1.0}}, 0.0);
        }
    }
    for (const auto& hg : f.hinges) {
        const int h = lp.add_col(hg.weight, 0.0, kInf);
        for (const auto& e : hg.exprs) {
            sprow row;
            for (int i = 0; i < f.dim; ++i)
                if (e.coeffs[i] != 0.0) row.emplace_back(i, e.coeffs[i]);
            row.emplace_back(h, -1.0);
            lp.add_ineq(std::move(row), -e.constant);
        }
    }
    if (f.topk) {
        const int zeta = lp.add_col(f.topk->weight * f.topk->k, 0.0, kInf, "zeta");
        for (const auto& e : f.topk->rows) {
            const int s = lp.add_col(f.topk->weight, 0.0, kInf);
            sprow pos, neg;
            for (int i = 0; i < f.dim; ++i) {
                if (e.coeffs[i] != 0.0) {
                    pos.emplace_back(i, e.coeffs[i]);
                    neg.emplace_back(i, -e.coeffs[i]);
                }
            }
            pos.emplace_back(zeta, -1.0);
            pos.emplace_back(s, -1.0);
            neg.emplace_back(zeta, -1.0);
            neg.emplace_back(s, -1.0);
            lp.add_ineq(std::move(pos), -e.constant);
            lp.add_ineq(std::move(neg), e.constant);
        }
    }
    const LPSolution sol = solve_lp(lp, {1e-9, 1e-9, 0});
    if (sol.status != LPStatus::Optimal)
        throw std::runtime_error(std::string("convex_subsolve: inner LP ") + to_string(sol.status) +
                                 " (check the hyperparameter combination)");
    SubsolveResult out;
    out.x.assign(sol.w.begin(), sol.w.begin() + f.dim);
    out.objective = f.value(out.x);
    return out;
}

SubsolveResult subsolve_subgradient(const ConvexObjective& f, const dvec& init,
                                    const TrainerConfig& cfg) {
    const double mu = f.quad;
    dvec x = init;
    x.resize(f.dim, 0.0);
    auto project = [&](dvec& v) {
        for (double& c : v) c = std::clamp(c, -cfg.var_box, cfg.var_box);
    };
    project(x);

    dvec best = x;
    const double init_f = f.value(x);
    double best_f = init_f;
    dvec avg = x;
    int avg_count = 1;
    int next_restart = 2;
    double window_best = best_f;
    bool improved = false; // large early steps can stall the objective at the
                           // start; the plateau check waits for real progress

    for (int t = 1; t <= cfg.inner_max_iters; ++t) {
        const dvec g = f.subgradient(x);
        const double step = 1.0 / (mu * t);
        for (int i = 0; i < f.dim; ++i) x[i] -= step * g[i];
        project(x);

        const double fx = f.value(x);
        if (fx < best_f) { best_f = fx; best = x; }

        // tail average over a doubling suffix window
        if (t == next_restart) {
            avg = x;
            avg_count = 1;
            next_restart *= 2;
        } else {
            ++avg_count;
            for (int i = 0; i < f.dim; ++i) avg[i] += (x[i] - avg[i]) / avg_count;
        }
        if (t % 64 == 0) {
            const double fa = f.value(avg);
            if (fa < best_f) { best_f = fa; best = avg; }
        }
        if (!improved && best_f < init_f - 1e-12 * std::max(1.0, std::fabs(init_f)))
            improved = true;
        if (improved && t % 512 == 0) {
            if (window_best - best_f < cfg.inner_tol * std::max(1.0, std::fabs(best_f))) break;
            window_best = best_f;
        }
    }
    return {best, best_f};
}

} // namespace

SubsolveResult convex_subsolve(const ConvexObjective& objective, const dvec& init,
                               const TrainerConfig& cfg) {
    if (static_cast<int>(objective.linear.size()) != objective.dim)
        throw DomainError("convex_subsolve: linear term dimension mismatch");
    if (objective.polyhedral()) return subsolve_lp(objective, cfg);
    if (objective.quad <= 0.0)
        throw DomainError("convex_subsolve: non-polyhedral objective needs a quadratic term");
    return subsolve_subgradient(objective, init, cfg);
}

// ---------------------------------------------------------------------------
// DCA-style trainers
// ---------------------------------------------------------------------------

namespace {

// Shared loop for the margin trainers: a polyhedral subproblem rebuilt from
// the current regularizer linearization, stopped on relative objective
// decrease of the true (DC) objective.
struct MarginSpec {
    int n = 0;
    double reg_scale = 0.0; // multiplies reg_value in the true objective
    std::optional<Regularizer> reg;
    ConvexObjective base;   // everything except the linearization term
};

LinearModel run_margin_dca(const MarginSpec& spec, const TrainerConfig& cfg) {
    LinearModel model;
    ConvexObjective sub = spec.base;

    // sub.value with the plain linear term already carries the convex
    // regularizer piece through l1_weight; subtracting the concave piece
    // yields the true DC objective.
    auto true_objective = [&](const dvec& x) {
        double v = sub.value(x);
        if (spec.reg_scale > 0.0) {
            dvec w(x.begin(), x.begin() + spec.n);
            v -= spec.reg_scale * reg_dc_parts(*spec.reg, w).concave_value;
        }
        return v;
    };

    // The convex piece of the regularizer lives in base.l1_weight, so the
    // initial solve is the plain problem with the subtracted part dropped.
    dvec lin0 = spec.base.linear;
    SubsolveResult cur = convex_subsolve(sub, dvec(sub.dim, 0.0), cfg);
    double F = true_objective(cur.x);
    model.objective_trace.push_back(F);

    if (spec.reg_scale > 0.0) {
        for (int it = 1; it <= cfg.dca_max_iters; ++it) {
            dvec w(cur.x.begin(), cur.x.begin() + spec.n);
            const RegDcParts parts = reg_dc_parts(*spec.reg, w);
            sub.linear = lin0;
            for (int i = 0; i < spec.n; ++i)
                sub.linear[i] -= spec.reg_scale * parts.concave_subgradient[i];
            cur = convex_subsolve(sub, cur.x, cfg);
            sub.linear = lin0;
            const double Fnew = true_objective(cur.x);
            model.objective_trace.push_back(Fnew);
            model.iterations = it;
            const bool converged = F - Fnew < cfg.dca_rel_tol * std::max(1.0, std::fabs(F));
            F = Fnew;
            if (converged) break;
        }
    }

    model.w.assign(cur.x.begin(), cur.x.begin() + spec.n);
    model.b = cur.x[spec.n];
    if (sub.dim > spec.n + 1) model.aux = cur.x[spec.n + 1];
    model.objective = F;
    return model;
}

} // namespace

LinearModel train_nu_svc_oro(const Dataset& data, const std::optional<Regularizer>& reg, double z,
                             double nu, const TrainerConfig& cfg) {
    data.validate(true);
    if (!(nu > 0.0) || nu > 1.0) throw DomainError("nu must lie in (0, 1]");
    if (z < 0.0) throw DomainError("z must be nonnegative");
    bool pos = false, neg = false;
    for (double t : data.y) (t > 0 ? pos : neg) = true;
    if (!pos || !neg) throw DomainError("nu-svc: both classes must be present");
    if (z > 0.0 && !reg) throw DomainError("nu-svc: z > 0 requires a regularizer");

    const int n = data.num_features();
    const int N = data.num_samples();
    MarginSpec spec;
    spec.n = n;
    spec.reg = reg;
    spec.reg_scale = z > 0.0 ? nu * z : 0.0;
    if (reg) reg->validate(n);

    ConvexObjective& f = spec.base;
    f.dim = n + 2; // [w, b, gamma]
    f.w_dim = n;
    f.linear.assign(f.dim, 0.0);
    f.linear[n + 1] = nu;
    if (spec.reg_scale > 0.0) {
        const bool scaled = reg->kind == RegKind::MCP || reg->kind == RegKind::SCAD;
        f.l1_weight = spec.reg_scale * (scaled ? *reg->lambda : 1.0);
    }
    for (int i = 0; i < N; ++i) {
        AffineExpr e;
        e.coeffs.assign(f.dim, 0.0);
        for (int j = 0; j < n; ++j) e.coeffs[j] = -data.y[i] * data.X[i][j];
        e.coeffs[n] = -data.y[i];
        e.coeffs[n + 1] = -1.0;
        f.hinges.push_back({1.0 / N, {std::move(e)}});
    }
    return run_margin_dca(spec, cfg);
}

LinearModel train_nu_svr_oro(const Dataset& data, const std::optional<Regularizer>& reg, double z,
                             double nu, double C, const TrainerConfig& cfg) {
    data.validate(false);
    if (!(nu > 0.0) || nu > 1.0) throw DomainError("nu must lie in (0, 1]");
    if (!(C > 0.0)) throw DomainError("C must be positive");
    if (z < 0.0) throw DomainError("z must be nonnegative");
    if (z > 0.0 && !reg) throw DomainError("nu-svr: z > 0 requires a regularizer");

    const int n = data.num_features();
    const int N = data.num_samples();
    MarginSpec spec;
    spec.n = n;
    spec.reg = reg;
    spec.reg_scale = z > 0.0 ? nu * z : 0.0;
    if (reg) reg->validate(n);

    ConvexObjective& f = spec.base;
    f.dim = n + 2; // [w, b, eps]
    f.w_dim = n;
    f.linear.assign(f.dim, 0.0);
    f.linear[n + 1] = C * nu;
    if (spec.reg_scale > 0.0) {
        const bool scaled = reg->kind == RegKind::MCP || reg->kind == RegKind::SCAD;
        f.l1_weight = spec.reg_scale * (scaled ? *reg->lambda : 1.0);
    }
    for (int i = 0; i < N; ++i) {
        AffineExpr above, below; // residual above / below the tube
        above.coeffs.assign(f.dim, 0.0);
        below.coeffs.assign(f.dim, 0.0);
        for (int j = 0; j < n; ++j) {
            above.coeffs[j] = -data.X[i][j];
            below.coeffs[j] = data.X[i][j];
        }
        above.coeffs[n] = -1.0;
        below.coeffs[n] = 1.0;
        above.coeffs[n + 1] = -1.0;
        below.coeffs[n + 1] = -1.0;
        above.constant = data.y[i];
        below.constant = -data.y[i];
        f.hinges.push_back({C / N, {std::move(above), std::move(below)}});
    }
    return run_margin_dca(spec, cfg);
}

LinearModel train_trimmed_regression(const Dataset& data, double nu, double mu, double C,
                                     LossKind loss, const TrainerConfig& cfg) {
    data.validate(false);
    if (!(nu > 0.0) || nu > 1.0) throw DomainError("nu must lie in (0, 1]");
    if (mu < 0.0 || mu >= nu) throw DomainError("trimming level mu must satisfy 0 <= mu < nu");
    if (!(C > 0.0)) throw DomainError("C must be positive");

    const int n = data.num_features();
    const int N = data.num_samples();
    const double k_keep = nu * N;
    const double k_trim = mu * N;
    const bool squared = loss == LossKind::Squared;

    ConvexObjective f;
    f.dim = n + 1; // [w, b]
    f.w_dim = n;
    f.quad = 1.0;
    f.linear.assign(f.dim, 0.0);
    TopkPenalty pen;
    pen.weight = C / N;
    pen.k = k_keep;
    pen.squared = squared;
    for (int i = 0; i < N; ++i) {
        AffineExpr e;
        e.coeffs.assign(f.dim, 0.0);
        for (int j = 0; j < n; ++j) e.coeffs[j] = -data.X[i][j];
        e.coeffs[n] = -1.0;
        e.constant = data.y[i];
        pen.rows.push_back(std::move(e));
    }
    f.topk = pen;

    auto residuals = [&](const dvec& x, dvec& raw, dvec& score) {
        raw.resize(N);
        score.resize(N);
        for (int i = 0; i < N; ++i) {
            raw[i] = dot(f.topk->rows[i].coeffs, x) + f.topk->rows[i].constant;
            score[i] = squared ? raw[i] * raw[i] : std::fabs(raw[i]);
        }
    };
    auto true_objective = [&](const dvec& x) {
        dvec raw, score;
        residuals(x, raw, score);
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += 0.5 * x[j] * x[j];
        v += (C / N) * (topk_norm_ext(score, k_keep) - topk_norm_ext(score, k_trim));
        return v;
    };

    LinearModel model;
    const dvec lin0 = f.linear;
    SubsolveResult cur = convex_subsolve(f, dvec(f.dim, 0.0), cfg);
    double F = true_objective(cur.x);
    model.objective_trace.push_back(F);

    if (k_trim > 0.0) {
        for (int it = 1; it <= cfg.dca_max_iters; ++it) {
            dvec raw, score;
            residuals(cur.x, raw, score);
            const dvec alpha = topk_subgradient_ext(score, k_trim);
            f.linear = lin0;
            for (int i = 0; i < N; ++i) {
                if (alpha[i] == 0.0) continue;
                const double dres = squared ? 2.0 * raw[i] : sign(raw[i]);
                const double factor = (C / N) * alpha[i] * dres;
                for (int d = 0; d < f.dim; ++d) f.linear[d] -= factor * f.topk->rows[i].coeffs[d];
            }
            cur = convex_subsolve(f, cur.x, cfg);
            f.linear = lin0;
            const double Fnew = true_objective(cur.x);
            model.objective_trace.push_back(Fnew);
            model.iterations = it;
            const bool converged = F - Fnew < cfg.dca_rel_tol * std::max(1.0, std::fabs(F));
            F = Fnew;
            if (converged) break;
        }
    }

    model.w.assign(cur.x.begin(), cur.x.begin() + n);
    model.b = cur.x[n];
    model.objective = F;
    dvec raw, score;
    residuals(cur.x, raw, score);
    const auto order = abs_order(score);
    for (int t = 0; t < static_cast<int>(std::floor(k_trim)); ++t)
        model.excluded_indices.push_back(order[t]);
    std::sort(model.excluded_indices.begin(), model.excluded_indices.end());
    return model;
}

LinearModel train_tsvc(const Dataset& data, double C, const dvec& optimistic_radii,
                       const TrainerConfig& cfg) {
    data.validate(true);
    if (!(C > 0.0)) throw DomainError("C must be positive");
    if (optimistic_radii.size() != data.X.size())
        throw DomainError("tsvc: one radius per sample required");
    for (double r : optimistic_radii)
        if (r < 0.0) throw DomainError("tsvc: radii must be nonnegative");

    const int n = data.num_features();
    const int N = data.num_samples();

    // Joint objective at (w, b) with the current disturbances folded in; the
    // closed-form inner step makes it equal to the -r_i*||w|| hinge form.
    auto make_subproblem = [&](const std::vector<dvec>& shift) {
        ConvexObjective f;
        f.dim = n + 1;
        f.w_dim = n;
        f.quad = 1.0;
        f.linear.assign(f.dim, 0.0);
        for (int i = 0; i < N; ++i) {
            AffineExpr e;
            e.coeffs.assign(f.dim, 0.0);
            for (int j = 0; j < n; ++j) e.coeffs[j] = -data.y[i] * (data.X[i][j] + shift[i][j]);
            e.coeffs[n] = -data.y[i];
            e.constant = 1.0;
            f.hinges.push_back({C, {std::move(e)}});
        }
        return f;
    };

    LinearModel model;
    std::vector<dvec> shift(N, dvec(n, 0.0));
    dvec x(n + 1, 0.0);
    double F = kInf;
    for (int it = 0; it <= cfg.dca_max_iters; ++it) {
        const ConvexObjective f = make_subproblem(shift);
        const SubsolveResult cur = convex_subsolve(f, x, cfg);
        x = cur.x;
        const double Fnew = f.value(x);
        model.objective_trace.push_back(Fnew);
        model.iterations = it;
        const bool converged = it > 0 && F - Fnew < cfg.dca_rel_tol * std::max(1.0, std::fabs(F));
        F = Fnew;
        if (converged) break;

        // inner argmin: push each point away from the plane along y_i*w
        const double wn = wnorm(x, n);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < n; ++j)
                shift[i][j] = wn > 0.0 ? optimistic_radii[i] * data.y[i] * x[j] / wn : 0.0;
    }

    model.w.assign(x.begin(), x.begin() + n);
    model.b = x[n];
    model.objective = F;
    return model;
}

LinearModel train_robust_csvm(const Dataset& data, double C, const dvec& pessimistic_radii,
                              const TrainerConfig& cfg) {
    data.validate(true);
    if (!(C > 0.0)) throw DomainError("C must be positive");
    if (pessimistic_radii.size() != data.X.size())
        throw DomainError("robust-csvm: one radius per sample required");
    for (double r : pessimistic_radii)
        if (r < 0.0) throw DomainError("robust-csvm: radii must be nonnegative");

    const int n = data.num_features();
    const int N = data.num_samples();
    ConvexObjective f;
    f.dim = n + 1;
    f.w_dim = n;
    f.quad = 1.0;
    f.linear.assign(f.dim, 0.0);
    for (int i = 0; i < N; ++i) {
        AffineExpr e;
        e.coeffs.assign(f.dim, 0.0);
        for (int j = 0; j < n; ++j) e.coeffs[j] = -data.y[i] * data.X[i][j];
        e.coeffs[n] = -data.y[i];
        e.constant = 1.0;
        e.wnorm_coeff = pessimistic_radii[i];
        f.hinges.push_back({C, {std::move(e)}});
    }
    const SubsolveResult cur = convex_subsolve(f, dvec(f.dim, 0.0), cfg);
    LinearModel model;
    model.w.assign(cur.x.begin(), cur.x.begin() + n);
    model.b = cur.x[n];
    model.objective = cur.objective;
    model.objective_trace.push_back(cur.objective);
    return model;
}

ProbeResult redundancy_probe(const Dataset& data, double C, double z_p, const TrainerConfig& cfg) {
    data.validate(true);
    if (z_p == 0.0) return {C, 0.0}; // the two problems coincide
    const int N = data.num_samples();
    const LinearModel robust = train_robust_csvm(data, C, dvec(N, z_p), cfg);

    // The plain problem is strongly convex in w, so its minimizer is unique;
    // solve from both a cold start and the robust separator and keep the
    // better-converged of the two approximations.
    const int n = data.num_features();
    auto discrepancy = [&](double c_hat) {
        ConvexObjective f;
        f.dim = n + 1;
        f.w_dim = n;
        f.quad = 1.0;
        f.linear.assign(f.dim, 0.0);
        for (int i = 0; i < N; ++i) {
            AffineExpr e;
            e.coeffs.assign(f.dim, 0.0);
            for (int j = 0; j < n; ++j) e.coeffs[j] = -data.y[i] * data.X[i][j];
            e.coeffs[n] = -data.y[i];
            e.constant = 1.0;
            f.hinges.push_back({c_hat, {std::move(e)}});
        }
        dvec warm = robust.w;
        warm.push_back(robust.b);
        const SubsolveResult cold = convex_subsolve(f, dvec(f.dim, 0.0), cfg);
        const SubsolveResult hot = convex_subsolve(f, warm, cfg);
        const dvec& x = hot.objective < cold.objective ? hot.x : cold.x;
        double s = 0.0;
        for (size_t j = 0; j < robust.w.size(); ++j) {
            const double d = robust.w[j] - x[j];
            s += d * d;
        }
        return std::sqrt(s);
    };

    ProbeResult best{C, discrepancy(C)};
    auto consider = [&](double c_hat, double disc) {
        if (disc < best.discrepancy) best = {c_hat, disc};
    };

    // golden section on log(c_hat) over a wide bracket
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(C) - std::log(1000.0);
    double hi = std::log(C) + std::log(1000.0);
    double m1 = hi - phi * (hi - lo);
    double m2 = lo + phi * (hi - lo);
    double f1 = discrepancy(std::exp(m1));
    double f2 = discrepancy(std::exp(m2));
    consider(std::exp(m1), f1);
    consider(std::exp(m2), f2);
    for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - phi * (hi - lo);
            f1 = discrepancy(std::exp(m1));
            consider(std::exp(m1), f1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + phi * (hi - lo);
            f2 = discrepancy(std::exp(m2));
            consider(std::exp(m2), f2);
        }
        if (hi - lo < 1e-4) break;
    }
    return best;
}

} // namespace oro
