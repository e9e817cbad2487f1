#pragma once

#include <cstddef>
#include <vector>

#include "specbranch/contour.hpp"
#include "specbranch/family.hpp"

namespace specbranch {

enum class Side { Left, Right };

struct TrackerOptions {
    int order = 1;                // 1: C¹ matching, 2: curvature sub-matching of slope ties
    double cluster_tol = 1e-6;    // relative to the largest |λ| on the grid
    double deriv_tol = 1e-6;
    double deriv_tie_tol = 1e-5;  // ties when |ρ - ρ'| ≤ deriv_tie_tol·(1 + |ρ|)
    int max_subdivision = 12;
    ContourOptions contour{};
};

/// Pairing of the branches meeting at a crossing.
///
/// `left`/`right` hold the one-sided derivatives per sorted position inside the cluster
/// (position 0 is the lowest eigenvalue just left, resp. right, of the crossing).
/// pairing[p] = q means the branch arriving at left position p leaves at right position q.
struct MatchReport {
    double t = 0.0;
    int order = 1;
    std::vector<double> left, right;
    std::vector<double> second_left, second_right;
    std::vector<int> pairing;
    double residual = 0.0;         // max_p |left[p] - right[pairing[p]]|
    double sorted_residual = 0.0;  // same for the identity pairing (unmatched arrangement)
};

MatchReport match_crossing(const std::vector<double>& left, const std::vector<double>& right,
                           int order = 1, const std::vector<double>& second_left = {},
                           const std::vector<double>& second_right = {},
                           double tie_tol = 1e-5);

struct Crossing {
    double t = 0.0;
    bool on_grid = false;
    std::vector<int> positions;  // sorted eigenvalue indices forming the cluster
    std::vector<int> branches;   // branch arriving at each left position
    std::vector<double> compressed;  // eigenvalues of P A' P on range P
    Contour contour;
    int rank = 0;
    MatchReport match;
};

/// N branches sampled on a grid. values/derivs are at unit scale (rows = grid points,
/// columns = branches); multiply by `prefactor` for the physical eigenvalues.
struct BranchSet {
    RealVector grid;
    RealMatrix values;
    RealMatrix derivs;
    std::vector<Crossing> crossings;
    double prefactor = 1.0;
    int order = 1;

    Eigen::Index branch_count() const { return values.cols(); }
    RealMatrix physical_values() const { return prefactor * values; }
    RealMatrix physical_derivs() const { return prefactor * derivs; }
};

// ⟨A'(t) w, w⟩ at unit scale; w must be a unit eigenvector of A(t).
double rayleigh_derivative(const HermitianFamily& family, double t, const ComplexVector& w);

// Eigenvalues of P A'(t) P restricted to range P, ascending.
std::vector<double> compressed_derivatives(const HermitianFamily& family, double t,
                                           const Contour& gamma,
                                           const ContourOptions& options = {});

/// One-sided derivatives of the sorted eigenvalues inside gamma at t, from 5-point stencils
/// on the requested side. The projector rank is checked at every probe point.
std::vector<double> one_sided_derivatives(const HermitianFamily& family, double t,
                                          const Contour& gamma, Side side,
                                          const ContourOptions& options = {});

RealVector uniform_grid(double t0, double t1, Eigen::Index size);

BranchSet track_branches(const HermitianFamily& family, const RealVector& grid,
                         const TrackerOptions& options = {});
BranchSet track_branches(const HermitianFamily& family, double t0, double t1,
                         Eigen::Index grid_size, const TrackerOptions& options = {});

// Eigenvalues in ascending order with Rayleigh slopes, no matching (negative control).
BranchSet sorted_arrangement(const HermitianFamily& family, const RealVector& grid);

struct GronwallViolation {
    Eigen::Index branch = 0;
    Eigen::Index i1 = 0, i2 = 0;
    double lhs = 0.0, rhs = 0.0;
};

struct GronwallReport {
    double a = 0.0;
    std::size_t checked = 0;
    std::size_t violation_count = 0;
    double min_margin = 0.0;  // min over pairs of rhs - lhs
    std::vector<GronwallViolation> violations;  // first 100

    bool holds() const { return violation_count == 0; }
};

/// Checks |λ(t1) - λ(t2)| ≤ (1 + |λ(t2)|)(e^{a|t1-t2|} - 1) for every branch and every
/// ordered pair of distinct grid points. `values` are physical.
GronwallReport gronwall_screen(const RealVector& grid, const RealMatrix& values, double a);

// max over the grid of ‖A'(t)(I + A(t)²)^{-1/2}‖ on the physical operators.
double gronwall_constant(const HermitianFamily& family, const RealVector& grid);

/// Completes k given branches μ to a parameterization with correct multiplicities.
///
/// Each μ_j is attached at every grid point to a λ-branch within `tol` (keeping the previous
/// attachment when still valid, otherwise the free one with the closest slope); the N-k
/// completions follow the λ-branches left over. Throws std::invalid_argument naming t and z
/// when the counting condition fails.
BranchSet extend_parameterization(const BranchSet& lambda, const RealMatrix& mu_values,
                                  const RealMatrix& mu_derivs, int order = 1,
                                  double tol = 1e-8);

} // namespace specbranch
