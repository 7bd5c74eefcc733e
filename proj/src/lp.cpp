#include "oro/lp.hpp"

#include <algorithm>
#include <cmath>

namespace oro {

int NominalLP::add_col(double cost, double lo, double hi, const std::string& name) {
    c.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    col_names.push_back(name.empty() ? "c" + std::to_string(c.size() - 1) : name);
    return static_cast<int>(c.size()) - 1;
}

void NominalLP::add_ineq(sprow row, double rhs, const std::string& name) {
    ineq.push_back(std::move(row));
    ineq_rhs.push_back(rhs);
    ineq_names.push_back(name.empty() ? "r" + std::to_string(ineq.size() - 1) : name);
}

void NominalLP::add_eq(sprow row, double rhs, const std::string& name) {
    eq.push_back(std::move(row));
    eq_rhs.push_back(rhs);
    eq_names.push_back(name.empty() ? "e" + std::to_string(eq.size() - 1) : name);
}

void NominalLP::validate() const {
    const int n = num_cols();
    if (lower.size() != c.size() || upper.size() != c.size())
        throw DomainError("lp: bound vectors must match objective length");
    for (int i = 0; i < n; ++i) {
        if (!(lower[i] <= upper[i]))
            throw DomainError("lp: lower > upper for column " + std::to_string(i));
        if (!std::isfinite(c[i])) throw DomainError("lp: non-finite objective coefficient");
    }
    if (ineq.size() != ineq_rhs.size() || eq.size() != eq_rhs.size())
        throw DomainError("lp: row/rhs size mismatch");
    for (double b : ineq_rhs)
        if (!std::isfinite(b)) throw DomainError("lp: non-finite right-hand side");
    for (double b : eq_rhs)
        if (!std::isfinite(b)) throw DomainError("lp: non-finite right-hand side");
    auto check_rows = [n](const std::vector<sprow>& rows) {
        for (const auto& r : rows)
            for (const auto& [j, v] : r) {
                if (j < 0 || j >= n) throw DomainError("lp: row references unknown column");
                if (!std::isfinite(v)) throw DomainError("lp: non-finite row coefficient");
            }
    };
    check_rows(ineq);
    check_rows(eq);
}

const char* to_string(LPStatus s) {
    switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

// Columns of the computational form [A | slacks | artificials] x = b.
struct Col {
    sprow a;
    double lo = 0.0;
    double hi = kInf;
    double cost = 0.0;    // phase-2 cost
    bool artificial = false;
};

enum class NbState { AtLower, AtUpper, FreeZero };

class Simplex {
  public:
    Simplex(const NominalLP& lp, const SimplexConfig& cfg) : cfg_(cfg) {
        nstruct_ = lp.num_cols();
        m_ = lp.num_ineq() + lp.num_eq();
        rhs_.resize(m_);
        cols_.reserve(nstruct_ + m_);
        for (int j = 0; j < nstruct_; ++j) {
            Col col;
            col.lo = lp.lower[j];
            col.hi = lp.upper[j];
            col.cost = lp.c[j];
            cols_.push_back(std::move(col));
        }
        for (int r = 0; r < lp.num_ineq(); ++r) {
            for (const auto& [j, v] : lp.ineq[r])
                if (v != 0.0) cols_[j].a.emplace_back(r, v);
            rhs_[r] = lp.ineq_rhs[r];
        }
        const int off = lp.num_ineq();
        for (int r = 0; r < lp.num_eq(); ++r) {
            for (const auto& [j, v] : lp.eq[r])
                if (v != 0.0) cols_[j].a.emplace_back(off + r, v);
            rhs_[off + r] = lp.eq_rhs[r];
        }
        slack_begin_ = nstruct_;
        for (int r = 0; r < lp.num_ineq(); ++r) {
            Col s;
            s.a.emplace_back(r, 1.0);
            cols_.push_back(std::move(s));
        }
        num_ineq_ = lp.num_ineq();
        max_iters_ = cfg.max_iters > 0 ? cfg.max_iters
                                       : 50 * (m_ + static_cast<int>(cols_.size()));
        bland_threshold_ = 3 * (m_ + static_cast<int>(cols_.size()));
    }

    LPSolution run() {
        LPSolution out;
        if (m_ == 0) return solve_unconstrained(out);
        init_basis();

        if (has_artificials_) {
            phase1_ = true;
            LPStatus st = iterate();
            if (st == LPStatus::Unbounded)
                throw std::logic_error("simplex: phase-1 objective unbounded");
            if (phase_objective() > cfg_.feas_tol * std::max(1.0, rhs_scale())) {
                out.status = LPStatus::Infeasible;
                out.iterations = iterations_;
                return out;
            }
            // Pin artificials at zero for phase 2; basic ones may linger,
            // degenerate, but can never move off zero again.
            for (auto& col : cols_)
                if (col.artificial) { col.lo = 0.0; col.hi = 0.0; }
        }
        phase1_ = false;
        stall_count_ = 0;
        bland_ = false;
        LPStatus st = iterate();
        out.status = st;
        out.iterations = iterations_;
        if (st != LPStatus::Optimal) return out;

        refactorize();
        out.w.assign(nstruct_, 0.0);
        for (int j = 0; j < nstruct_; ++j) out.w[j] = value_of(j);
        out.objective = 0.0;
        for (int j = 0; j < nstruct_; ++j) out.objective += cols_[j].cost * out.w[j];
        const dvec y = duals();
        out.ineq_duals.assign(y.begin(), y.begin() + num_ineq_);
        out.eq_duals.assign(y.begin() + num_ineq_, y.end());
        out.reduced_costs.resize(nstruct_);
        for (int j = 0; j < nstruct_; ++j)
            out.reduced_costs[j] = cols_[j].cost - dot(cols_[j].a, y);
        return out;
    }

  private:
    LPSolution solve_unconstrained(LPSolution& out) {
        // No rows: each variable independently moves to its cheaper bound.
        out.w.assign(nstruct_, 0.0);
        out.objective = 0.0;
        for (int j = 0; j < nstruct_; ++j) {
            const Col& col = cols_[j];
            double v;
            if (col.cost > cfg_.opt_tol) v = col.lo;
            else if (col.cost < -cfg_.opt_tol) v = col.hi;
            else v = initial_value(col);
            if (!std::isfinite(v) && col.cost != 0.0) {
                out.status = LPStatus::Unbounded;
                return out;
            }
            if (!std::isfinite(v)) v = initial_value(col);
            out.w[j] = v;
            out.objective += col.cost * v;
        }
        out.status = LPStatus::Optimal;
        out.reduced_costs.assign(nstruct_, 0.0);
        for (int j = 0; j < nstruct_; ++j) out.reduced_costs[j] = cols_[j].cost;
        return out;
    }

    static double initial_value(const Col& col) {
        if (std::isfinite(col.lo) && std::isfinite(col.hi))
            return std::fabs(col.lo) <= std::fabs(col.hi) ? col.lo : col.hi;
        if (std::isfinite(col.lo)) return col.lo;
        if (std::isfinite(col.hi)) return col.hi;
        return 0.0;
    }

    double rhs_scale() const {
        double s = 1.0;
        for (double b : rhs_) s = std::max(s, std::fabs(b));
        return s;
    }

    void init_basis() {
        const int ncols0 = static_cast<int>(cols_.size());
        nb_state_.assign(ncols0, NbState::AtLower);
        for (int j = 0; j < ncols0; ++j) {
            const Col& col = cols_[j];
            if (!std::isfinite(col.lo) && !std::isfinite(col.hi))
                nb_state_[j] = NbState::FreeZero;
            else if (!std::isfinite(col.lo))
                nb_state_[j] = NbState::AtUpper;
            else if (std::isfinite(col.hi) && std::fabs(col.hi) < std::fabs(col.lo))
                nb_state_[j] = NbState::AtUpper;
            else
                nb_state_[j] = NbState::AtLower;
        }

        dvec resid = rhs_;
        for (int j = 0; j < ncols0; ++j) {
            const double v = nb_value(j);
            if (v != 0.0)
                for (const auto& [r, a] : cols_[j].a) resid[r] -= a * v;
        }

        basis_.assign(m_, -1);
        in_basis_pos_.assign(ncols0, -1);
        has_artificials_ = false;
        for (int r = 0; r < m_; ++r) {
            if (r < num_ineq_ && resid[r] >= 0.0) {
                set_basic(slack_begin_ + r, r);
                continue;
            }
            Col art;
            art.artificial = true;
            art.a.emplace_back(r, resid[r] >= 0.0 ? 1.0 : -1.0);
            cols_.push_back(std::move(art));
            nb_state_.push_back(NbState::AtLower);
            in_basis_pos_.push_back(-1);
            set_basic(static_cast<int>(cols_.size()) - 1, r);
            has_artificials_ = true;
            if (r < num_ineq_) nb_state_[slack_begin_ + r] = NbState::AtLower;
        }
        refactorize();
    }

    void set_basic(int j, int row) {
        basis_[row] = j;
        in_basis_pos_[j] = row;
    }

    double cost_of(int j) const {
        if (phase1_) return cols_[j].artificial ? 1.0 : 0.0;
        return cols_[j].artificial ? 0.0 : cols_[j].cost;
    }

    double nb_value(int j) const {
        switch (nb_state_[j]) {
        case NbState::AtLower: return cols_[j].lo;
        case NbState::AtUpper: return cols_[j].hi;
        case NbState::FreeZero: return 0.0;
        }
        return 0.0;
    }

    double value_of(int j) const {
        const int pos = in_basis_pos_[j];
        return pos >= 0 ? xb_[pos] : nb_value(j);
    }

    double phase_objective() const {
        double s = 0.0;
        for (int r = 0; r < m_; ++r) s += cost_of(basis_[r]) * xb_[r];
        for (size_t j = 0; j < cols_.size(); ++j)
            if (in_basis_pos_[j] < 0) s += cost_of(static_cast<int>(j)) * nb_value(static_cast<int>(j));
        return s;
    }

    // Rebuilds binv_ by Gauss-Jordan with partial pivoting, then recomputes
    // the basic values from scratch.
    void refactorize() {
        const int m = m_;
        std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
        std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
        for (int r = 0; r < m; ++r) inv[static_cast<size_t>(r) * m + r] = 1.0;
        for (int p = 0; p < m; ++p)
            for (const auto& [r, v] : cols_[basis_[p]].a) mat[static_cast<size_t>(r) * m + p] = v;

        for (int k = 0; k < m; ++k) {
            int piv = k;
            double best = std::fabs(mat[static_cast<size_t>(k) * m + k]);
            for (int r = k + 1; r < m; ++r) {
                const double cand = std::fabs(mat[static_cast<size_t>(r) * m + k]);
                if (cand > best) { best = cand; piv = r; }
            }
            if (best < 1e-12) throw std::logic_error("simplex: singular basis during refactorization");
            if (piv != k) {
                for (int cidx = 0; cidx < m; ++cidx) {
                    std::swap(mat[static_cast<size_t>(piv) * m + cidx], mat[static_cast<size_t>(k) * m + cidx]);
                    std::swap(inv[static_cast<size_t>(piv) * m + cidx], inv[static_cast<size_t>(k) * m + cidx]);
                }
            }
            const double d = mat[static_cast<size_t>(k) * m + k];
            for (int cidx = 0; cidx < m; ++cidx) {
                mat[static_cast<size_t>(k) * m + cidx] /= d;
                inv[static_cast<size_t>(k) * m + cidx] /= d;
            }
            for (int r = 0; r < m; ++r) {
                if (r == k) continue;
                const double f = mat[static_cast<size_t>(r) * m + k];
                if (f == 0.0) continue;
                for (int cidx = 0; cidx < m; ++cidx) {
                    mat[static_cast<size_t>(r) * m + cidx] -= f * mat[static_cast<size_t>(k) * m + cidx];
                    inv[static_cast<size_t>(r) * m + cidx] -= f * inv[static_cast<size_t>(k) * m + cidx];
                }
            }
        }
        binv_ = std::move(inv);

        dvec resid = rhs_;
        for (size_t j = 0; j < cols_.size(); ++j) {
            if (in_basis_pos_[j] >= 0) continue;
            const double v = nb_value(static_cast<int>(j));
            if (v != 0.0)
                for (const auto& [r, a] : cols_[j].a) resid[r] -= a * v;
        }
        xb_.assign(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            for (int cidx = 0; cidx < m_; ++cidx) s += binv_[static_cast<size_t>(r) * m_ + cidx] * resid[cidx];
            xb_[r] = s;
        }
        pivots_since_refactor_ = 0;
    }

    dvec duals() const {
        dvec y(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            const double cb = cost_of(basis_[r]);
            if (cb == 0.0) continue;
            for (int cidx = 0; cidx < m_; ++cidx) y[cidx] += cb * binv_[static_cast<size_t>(r) * m_ + cidx];
        }
        return y;
    }

    dvec ftran(int j) const {
        dvec alpha(m_, 0.0);
        for (const auto& [r, v] : cols_[j].a)
            for (int i = 0; i < m_; ++i) alpha[i] += binv_[static_cast<size_t>(i) * m_ + r] * v;
        return alpha;
    }

    LPStatus iterate() {
        const double pivot_tol = 1e-9;
        double prev_obj = phase_objective();
        while (true) {
            if (iterations_ >= max_iters_)
                throw IterationLimitError("simplex: iteration limit (" + std::to_string(max_iters_) +
                                          ") exceeded");
            const dvec y = duals();

            int enter = -1;
            int dir = +1;
            double best_score = cfg_.opt_tol;
            for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
                if (in_basis_pos_[j] >= 0) continue;
                const Col& col = cols_[j];
                if (col.lo == col.hi && std::isfinite(col.lo)) continue; // fixed
                const double d = cost_of(j) - dot(col.a, y);
                int cand_dir = 0;
                switch (nb_state_[j]) {
                case NbState::AtLower:
                    if (d < -cfg_.opt_tol) cand_dir = +1;
                    break;
                case NbState::AtUpper:
                    if (d > cfg_.opt_tol) cand_dir = -1;
                    break;
                case NbState::FreeZero:
                    if (d < -cfg_.opt_tol) cand_dir = +1;
                    else if (d > cfg_.opt_tol) cand_dir = -1;
                    break;
                }
                if (cand_dir == 0) continue;
                if (bland_) { enter = j; dir = cand_dir; break; }
                if (std::fabs(d) > best_score) {
                    best_score = std::fabs(d);
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0) return LPStatus::Optimal;

            const dvec alpha = ftran(enter);

            // Ratio test over blocking basic variables plus the entering
            // variable's own opposite bound. Ties go to the smallest variable
            // index (Bland-compatible).
            double t_max = kInf;
            int leave_pos = -1;
            const Col& ecol = cols_[enter];
            double t_enter = kInf;
            if (std::isfinite(ecol.lo) && std::isfinite(ecol.hi)) t_enter = ecol.hi - ecol.lo;
            for (int r = 0; r < m_; ++r) {
                const double step = dir * alpha[r];
                if (std::fabs(step) < pivot_tol) continue;
                const Col& bcol = cols_[basis_[r]];
                double t;
                if (step > 0.0) {
                    if (!std::isfinite(bcol.lo)) continue;
                    t = (xb_[r] - bcol.lo) / step;
                } else {
                    if (!std::isfinite(bcol.hi)) continue;
                    t = (xb_[r] - bcol.hi) / step;
                }
                if (t < -1e-12) t = 0.0;
                if (t < t_max - 1e-12 ||
                    (t <= t_max + 1e-12 && leave_pos >= 0 && basis_[r] < basis_[leave_pos])) {
                    t_max = std::max(t, 0.0);
                    leave_pos = r;
                }
            }

            if (!std::isfinite(t_max) && !std::isfinite(t_enter))
                return LPStatus::Unbounded;

            ++iterations_;
            ++pivots_since_refactor_;

            if (t_enter <= t_max) {
                // Bound flip: entering variable jumps to its opposite bound.
                for (int r = 0; r < m_; ++r) xb_[r] -= t_enter * dir * alpha[r];
                nb_state_[enter] =
                    nb_state_[enter] == NbState::AtLower ? NbState::AtUpper : NbState::AtLower;
            } else {
                const double enter_val = nb_value(enter) + dir * t_max;
                for (int r = 0; r < m_; ++r) xb_[r] -= t_max * dir * alpha[r];
                const int leave = basis_[leave_pos];
                nb_state_[leave] = dir * alpha[leave_pos] > 0.0 ? NbState::AtLower : NbState::AtUpper;
                if (!std::isfinite(cols_[leave].lo) && nb_state_[leave] == NbState::AtLower)
                    nb_state_[leave] = NbState::FreeZero;
                if (!std::isfinite(cols_[leave].hi) && nb_state_[leave] == NbState::AtUpper)
                    nb_state_[leave] = NbState::FreeZero;
                in_basis_pos_[leave] = -1;
                set_basic(enter, leave_pos);
                xb_[leave_pos] = enter_val;
                update_binv(alpha, leave_pos);
            }

            // the rebuild is cubic in the row count, so its cadence stretches
            // with problem size while small bases stay on a tight leash
            if (pivots_since_refactor_ >= std::max(128, m_ / 4)) refactorize();

            const double obj = phase_objective();
            if (prev_obj - obj < 1e-12 * std::max(1.0, std::fabs(prev_obj))) {
                if (++stall_count_ > bland_threshold_ && !bland_) {
                    bland_ = true;
                    log_debug("simplex: switching to Bland's rule after stall");
                }
            } else {
                stall_count_ = 0;
            }
            prev_obj = obj;
        }
    }

    void update_binv(const dvec& alpha, int p) {
        const double piv = alpha[p];
        double* rowp = &binv_[static_cast<size_t>(p) * m_];
        for (int c = 0; c < m_; ++c) rowp[c] /= piv;
        for (int r = 0; r < m_; ++r) {
            if (r == p) continue;
            const double f = alpha[r];
            if (f == 0.0) continue;
            double* rowr = &binv_[static_cast<size_t>(r) * m_];
            for (int c = 0; c < m_; ++c) rowr[c] -= f * rowp[c];
        }
    }

    SimplexConfig cfg_;
    int nstruct_ = 0;
    int m_ = 0;
    int num_ineq_ = 0;
    int slack_begin_ = 0;
    std::vector<Col> cols_;
    dvec rhs_;
    std::vector<int> basis_;
    std::vector<int> in_basis_pos_;
    std::vector<NbState> nb_state_;
    dvec xb_;
    dvec binv_;
    bool has_artificials_ = false;
    bool phase1_ = false;
    bool bland_ = false;
    int stall_count_ = 0;
    int bland_threshold_ = 0;
    int iterations_ = 0;
    int pivots_since_refactor_ = 0;
    int max_iters_ = 0;
};

} // namespace

LPSolution solve_lp(const NominalLP& lp, const SimplexConfig& cfg) {
    lp.validate();
    Simplex solver(lp, cfg);
    return solver.run();
}

} // namespace oro
