#pragma once

#include <functional>
#include <string>

#include "specbranch/family.hpp"
#include "specbranch/tracker.hpp"

namespace specbranch {

// Curve-lemma construction. Windows |t - t_n| ≤ 1/n² around t_n = 4 Σ_{k≤n} k⁻² are pairwise
// disjoint for n ≥ 2; inside window n the family is A_n(s) = 2^{-n²}[[1, s/s_n], [s/s_n, -1]]
// with s_n = 2^{n-n²}.
double curve_lemma_center(int n);
double curve_lemma_halfwidth(int n);
double curve_lemma_scale(int n);      // s_n
double curve_lemma_prefactor(int n);  // 2^{-n²}

// A_n in the local variable s, unit scale with prefactor 2^{-n²}.
HermitianFamily curve_lemma_window(int n);
// A_n in u = s/s_n: [[1, u], [u, -1]], prefactor 2^{-n²}.
HermitianFamily curve_lemma_unit_window(int n);
// The glued curve in absolute t for windows 2..n_max, C^∞ blends in between.
HermitianFamily curve_lemma_family(int n_max);

struct HolderQuotient {
    int n = 0;
    double alpha = 0.0;
    double closed_form = 0.0;
    double numerical = 0.0;  // from tracked branch derivatives
    double analytic = 0.0;   // from λ_n'(t) = 2^{n²-2n} t / √(1 + (t/s_n)²)
    double relative_difference = 0.0;
};

/// (λ'(t_n + s_n) - λ'(t_n)) / s_n^α for the upper branch of window n.
///
/// With prefactor handling the branches are tracked on the unit window and rescaled exactly
/// by powers of two; without it the physical window is tracked directly, which is refused for
/// n > 15 (Failure::Underflow).
HolderQuotient holder_quotient(int n, double alpha, bool use_prefactor = true);

// Angle between the top eigenvectors of two Hermitian matrices.
double eigenvector_jump(const ComplexMatrix& a, const ComplexMatrix& b);
// Same for A_n(0) and A_n(s_n); π/8 for every n.
double eigenvector_jump(int n);

struct Bump {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

// exp(1 - 1/(1 - (s-1)²)) on (0, 2), zero elsewhere: λ(0) = λ'(0) = 0, λ(1) = 1.
Bump standard_bump();

// Truncated A(t) = B(t) C⁻¹ = diag(k + λ_1(k t)), k = 1..m.
HermitianFamily resolvent_example_family(int m, const Bump& bump = standard_bump());

struct ResolventQuotient {
    double t = 0.0;
    double pointwise_max = 0.0;  // max over k ≤ K of |μ_k(t)|
    double norm_quotient = 0.0;  // ‖(B(t) - B(0))/t - B'(0)‖ over k ≤ m
};

ResolventQuotient resolvent_weak_vs_norm(int m, double t, int K = 5,
                                         const Bump& bump = standard_bump());

// -d²/dx² + V(t, x) on (0, 1) with Dirichlet ends, m interior points, h = 1/(m+1).
HermitianFamily schrodinger_family(const std::string& potential, int m);

BranchSet schrodinger_track(const std::string& potential, int m, double t0, double t1,
                            Eigen::Index grid_size, const TrackerOptions& options = {});

} // namespace specbranch
