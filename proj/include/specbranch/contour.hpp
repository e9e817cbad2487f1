#pragma once

#include <vector>

#include "specbranch/family.hpp"
#include "specbranch/matrix_core.hpp"

namespace specbranch {

// Positively oriented circle |z - center| = radius with `nodes` trapezoid points.
struct Contour {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    int nodes = 64;

    bool encloses(double lambda) const { return std::abs(Complex(lambda) - center) < radius; }
    // Distance from `lambda` to the circle itself.
    double clearance(double lambda) const
    {
        return std::abs(std::abs(Complex(lambda) - center) - radius);
    }
};

struct ContourOptions {
    double proj_tol = 1e-10;
    int max_nodes = 1024;
    double separation_margin = 0.1;
    // Check the margin against a fresh eigensolve before integrating (family overloads only).
    bool check_separation = true;
    Tolerances tol{};
};

// Throws ContourTouchesSpectrum when some eigenvalue lies within margin·radius of the circle.
void check_separation(const Contour& gamma, const RealVector& spectrum, double margin);

/// Result of integrating the resolvent of one matrix around one contour.
///
/// The node count starts at gamma.nodes and doubles (reusing the previous nodes) until both
/// the projector and the power sums change by at most proj_tol.
struct ResolventIntegral {
    ComplexMatrix projector;
    std::vector<Complex> power_sums;  // -(1/2πi) ∮ z^p Tr (A - z)^{-1} dz, p = 0..p_max
    std::vector<Complex> local_sums;  // same with ((z - center)/radius)^p
    int nodes = 0;
    double change = 0.0;  // ‖P_M - P_{M/2}‖_F at acceptance
};

ResolventIntegral integrate_resolvent(const ComplexMatrix& a, const Contour& gamma, int p_max,
                                      const ContourOptions& options = {});

ComplexMatrix riesz_projector(const ComplexMatrix& a, const Contour& gamma,
                              const ContourOptions& options = {});
ComplexMatrix riesz_projector(const HermitianFamily& family, double t, const Contour& gamma,
                              const ContourOptions& options = {});

// s_0..s_{p_max}; imaginary parts are checked against 1e-8·(1+|s_p|) and dropped.
std::vector<double> newton_sums(const ComplexMatrix& a, const Contour& gamma, int p_max,
                                const ContourOptions& options = {});
std::vector<double> newton_sums(const HermitianFamily& family, double t, const Contour& gamma,
                                int p_max, const ContourOptions& options = {});

// σ_1..σ_N from s_0..s_N by Newton's identities.
std::vector<double> newton_to_sigma(const std::vector<double>& s, int n);

// Real roots (ascending, with multiplicity) of x^N - σ_1 x^{N-1} + σ_2 x^{N-2} - ...
std::vector<double> cluster_eigenvalues(const std::vector<double>& sigma, int n);

struct SpectralCluster {
    double t = 0.0;
    ComplexMatrix projector;
    int rank = 0;
    std::vector<double> newton_sums;  // s_0..s_{2N}
    std::vector<double> sigma;        // σ_1..σ_N
    std::vector<double> local_sums;   // Σ ((μ - center)/radius)^p, p = 0..2N
    std::vector<double> eigenvalues;  // unit scale, ascending
    int nodes = 0;
};

// Roots are recovered from the contour-local sums, which stay well conditioned when the
// cluster is tight and far from the origin; sigma follows the raw sums.
SpectralCluster spectral_cluster(const HermitianFamily& family, double t, const Contour& gamma,
                                 const ContourOptions& options = {});

// Eigenvalue count of a near-idempotent: singular values above 1/2.
int projector_rank(const ComplexMatrix& p);

struct LowRankTrace {
    Complex trace;
    ComplexMatrix block;  // reduced N×N operator on the reference range
};

/// Trace of a rank-≤N operator T computed on the range F of a reference operator.
///
/// With G the orthogonal complement of F and T written in blocks [[a, b], [c, d]] over
/// (F, G), rank(T) = rank(a) forces d = c a⁻¹ b, so tr T = tr(a + b c a⁻¹). The returned block
/// is a + b c a⁻¹.
LowRankTrace lowrank_trace(const ComplexMatrix& t, int n, const ComplexMatrix& reference);
LowRankTrace lowrank_trace(const ComplexMatrix& t, int n);

} // namespace specbranch
