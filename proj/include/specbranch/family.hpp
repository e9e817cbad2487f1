#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "specbranch/expression.hpp"
#include "specbranch/matrix_core.hpp"

namespace specbranch {

using MatrixFunction = std::function<ComplexMatrix(double)>;

// Central-difference steps, scaled by max(1, |t|) at use.
struct FiniteDifferenceSteps {
    double first = 1e-5;
    double second = 1e-4;
};

/// A curve t ↦ A(t) of m×m Hermitian matrices.
///
/// `eval` returns the matrix at unit scale; the physical operator is prefactor·eval(t). Keeping
/// the t-independent prefactor outside the matrix lets families like 2^{-n²}·A_n be handled
/// at unit scale, with eigenvalues rescaled exactly afterwards. When no analytic derivative
/// is supplied, central differences stand in.
class HermitianFamily {
public:
    HermitianFamily(std::string name, Eigen::Index dimension, MatrixFunction eval,
                    MatrixFunction derivative = {}, MatrixFunction second_derivative = {},
                    double prefactor = 1.0);

    const std::string& name() const noexcept { return name_; }
    Eigen::Index dimension() const noexcept { return dimension_; }
    double prefactor() const noexcept { return prefactor_; }
    bool has_analytic_derivative() const noexcept { return static_cast<bool>(derivative_); }

    // Unit-scale matrix, checked for shape and Hermiticity.
    ComplexMatrix eval(double t) const;
    ComplexMatrix operator()(double t) const { return eval(t); }
    ComplexMatrix derivative(double t) const;
    ComplexMatrix second_derivative(double t) const;

    ComplexMatrix physical(double t) const { return prefactor_ * eval(t); }
    ComplexMatrix physical_derivative(double t) const { return prefactor_ * derivative(t); }

    const FiniteDifferenceSteps& steps() const noexcept { return steps_; }
    HermitianFamily& set_steps(FiniteDifferenceSteps steps);
    const Tolerances& tolerances() const noexcept { return tolerances_; }
    HermitianFamily& set_tolerances(const Tolerances& tol);

    // Free-form metadata (family parameters), reported by the CLI.
    std::map<std::string, std::string> params;

private:
    std::string name_;
    Eigen::Index dimension_;
    MatrixFunction eval_;
    MatrixFunction derivative_;
    MatrixFunction second_derivative_;
    double prefactor_;
    FiniteDifferenceSteps steps_{};
    Tolerances tolerances_{};
};

// (A(t+h) - A(t-h)) / 2h on the unit-scale matrices, Hermitian-symmetrized.
ComplexMatrix central_difference(const HermitianFamily& family, double t, double h);

// t ↦ A'(t) (analytic when available, central differences otherwise).
MatrixFunction derivative_family(const HermitianFamily& family);

/// Graph norm ‖u‖_t = sqrt(‖u‖² + ‖A(t)u‖²) of the physical operator.
double graph_norm(const HermitianFamily& family, double t, const ComplexVector& u);

/// Empirical equivalence constant: the largest ‖u‖_t over the sampled directions with
/// ‖u‖_s = 1. The sample set is `samples` seeded Gaussian directions plus the extremal
/// direction of the pencil (I + A(t)², I + A(s)²), so the value is the supremum itself.
double graph_norm_equivalence_ratio(const HermitianFamily& family, double s, double t,
                                    int samples, std::uint64_t seed = 0);

/// Operator norm of A'(t) as a map (V, ‖·‖_t) → H, i.e. ‖A'(t) (I + A(t)²)^{-1/2}‖.
double graph_operator_norm(const HermitianFamily& family, double t);

// Matrix of expression strings in t; upper triangle (m(m+1)/2 entries, row-major) or all m²
// entries. In the full form a lower-triangle "*" mirrors the conjugate of the upper entry.
struct ExprMatrixSpec {
    Eigen::Index dimension = 0;
    std::vector<std::string> entries;
};

HermitianFamily make_expression_family(const ExprMatrixSpec& spec, std::string name = "expr");

} // namespace specbranch
