#include "oro/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oro {

namespace {

void check_k(const dvec& v, double k) {
    if (v.empty()) throw DomainError("topk norm: empty vector");
    if (!(k >= 1.0) || !(k <= static_cast<double>(v.size())))
        throw DomainError("topk norm: k must lie in [1, n], got k=" + fmt_double(k) +
                          " with n=" + std::to_string(v.size()));
}

} // namespace

std::vector<int> abs_order(const dvec& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::fabs(v[a]) > std::fabs(v[b]); });
    return idx;
}

double topk_norm(const dvec& v, double k) {
    check_k(v, k);
    const auto order = abs_order(v);
    const int whole = static_cast<int>(std::floor(k));
    const double frac = k - whole;
    double s = 0.0;
    for (int i = 0; i < whole; ++i) s += std::fabs(v[order[i]]);
    if (frac > 0.0) s += frac * std::fabs(v[order[whole]]);
    return s;
}

TopkVariational topk_norm_variational(const dvec& v, double k) {
    check_k(v, k);
    // Piecewise-linear convex objective; the minimum is attained at a
    // breakpoint. Among minimizers, return the largest breakpoint (the k-th
    // largest magnitude in the integer case).
    std::vector<double> brk;
    brk.reserve(v.size() + 1);
    brk.push_back(0.0);
    for (double x : v) brk.push_back(std::fabs(x));
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    double best_val = 0.0;
    double best_zeta = 0.0;
    bool first = true;
    for (double zeta : brk) {
        double val = k * zeta;
        for (double x : v) val += std::max(0.0, std::fabs(x) - zeta);
        const double tol = 1e-15 * std::max(1.0, std::fabs(best_val));
        if (first || val < best_val - tol || (val <= best_val + tol && zeta > best_zeta)) {
            best_val = first ? val : std::min(val, best_val);
            best_zeta = zeta;
            first = false;
        }
    }
    return {best_val, best_zeta};
}

double topk_dual_norm(const dvec& v, double k) {
    check_k(v, k);
    return std::max(lp_norm(v, Lp::One) / k, lp_norm(v, Lp::Inf));
}

dvec topk_subgradient(const dvec& v, double k) {
    check_k(v, k);
    const auto order = abs_order(v);
    const int whole = static_cast<int>(std::floor(k));
    const double frac = k - whole;
    dvec g(v.size(), 0.0);
    for (int i = 0; i < whole; ++i) g[order[i]] = sign(v[order[i]]);
    if (frac > 0.0) g[order[whole]] = frac * sign(v[order[whole]]);
    return g;
}

double lp_norm(const dvec& v, Lp p) {
    double s = 0.0;
    switch (p) {
    case Lp::One:
        for (double x : v) s += std::fabs(x);
        return s;
    case Lp::Two:
        for (double x : v) s += x * x;
        return std::sqrt(s);
    case Lp::Inf:
        for (double x : v) s = std::max(s, std::fabs(x));
        return s;
    }
    return s;
}

double cvar_norm(const dvec& v, double k) { return topk_norm(v, k) / k; }

double topk_norm_ext(const dvec& v, double k) {
    if (k == 0.0 || v.empty()) return 0.0;
    if (k < 1.0) return k * lp_norm(v, Lp::Inf);
    return topk_norm(v, k);
}

dvec topk_subgradient_ext(const dvec& v, double k) {
    if (k == 0.0 || v.empty()) return dvec(v.size(), 0.0);
    if (k < 1.0) {
        dvec g(v.size(), 0.0);
        int best = 0;
        for (size_t i = 1; i < v.size(); ++i)
            if (std::fabs(v[i]) > std::fabs(v[best])) best = static_cast<int>(i);
        g[best] = k * sign(v[best]);
        return g;
    }
    return topk_subgradient(v, k);
}

} // namespace oro
