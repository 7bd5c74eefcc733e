#pragma once

#include "oro/common.hpp"

namespace oro {

enum class Lp { One, Two, Inf };

/// Sum of the floor(k) largest absolute components plus a (k - floor(k))
/// fraction of the next one. Interpolates between the max norm at k = 1 and
/// the L1 norm at k = n. Requires 1 <= k <= len(v).
double topk_norm(const dvec& v, double k);

/// Same value obtained from the epigraph form
///   min_{zeta >= 0}  k*zeta + sum_i [|v_i| - zeta]^+ ,
/// minimized exactly over the breakpoints {0} u {|v_i|}. Returns the value
/// and the largest minimizing zeta. (The often-quoted scaled variant
/// zeta + (1/k)*sum[v_i - zeta]^+ evaluates to the averaged quantity
/// cvar_norm instead, and drops the absolute values; this form is the one
/// that reproduces the sort definition.)
struct TopkVariational {
    double value;
    double zeta;
};
TopkVariational topk_norm_variational(const dvec& v, double k);

/// Dual norm: max(||v||_1 / k, ||v||_inf).
double topk_dual_norm(const dvec& v, double k);

/// A subgradient g of the largest-k norm at v: sign(v_i) on the floor(k)
/// largest-magnitude coordinates, (k - floor(k))*sign(v_i) on the next one,
/// zero elsewhere. Ties among equal magnitudes go to the lowest index and
/// sign(0) = 0, so g'v = topk_norm(v, k) holds exactly and g lies in the dual
/// unit ball.
dvec topk_subgradient(const dvec& v, double k);

double lp_norm(const dvec& v, Lp p);

/// topk_norm(v, k) / k - the averaged (CVaR) scaling of the same quantity.
double cvar_norm(const dvec& v, double k);

/// Extension of topk_norm to orders k in [0, n], continuing the epigraph form
/// below 1: the value is k * ||v||_inf there. Fractional budgets (optimism
/// r < 1, trimming counts below one sample) land in this range.
double topk_norm_ext(const dvec& v, double k);
dvec topk_subgradient_ext(const dvec& v, double k);

/// Indices of v ordered by decreasing |v_i|, ties by lowest index first.
std::vector<int> abs_order(const dvec& v);

} // namespace oro
