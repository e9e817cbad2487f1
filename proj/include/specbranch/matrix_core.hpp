#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "specbranch/errors.hpp"

namespace specbranch {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

struct Tolerances {
    double hermitian = 1e-10;
    double eig = 1e-10;
    double solve = 1e-10;
    int max_sweeps = 64;
};

// Eigenvalues ascending, eigenvectors as unitary columns.
template <typename Scalar>
struct EigenDecomposition {
    RealVector eigenvalues;
    DenseMatrix<Scalar> eigenvectors;
};

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
double phase_of(const Scalar& x)
{
    if constexpr (is_complex<Scalar>::value) {
        return std::arg(x);
    } else {
        return x < 0 ? M_PI : 0.0;
    }
}

template <typename Scalar>
Eigen::Index first_significant(const DenseMatrix<Scalar>& v, Eigen::Index col)
{
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        if (std::abs(v(i, col)) > 1e-8) return i;
    }
    return v.rows();
}

// Cyclic-by-row Jacobi with an element threshold of eps*||A||_F/n. `a` is overwritten with
// its (numerically) diagonal form and `v` accumulates the rotations.
template <typename Scalar>
void cyclic_jacobi(DenseMatrix<Scalar>& a, DenseMatrix<Scalar>& v, int max_sweeps)
{
    const Eigen::Index n = a.rows();
    v.setIdentity(n, n);
    const double norm = a.norm();
    if (n < 2 || norm == 0.0) return;
    const double threshold =
        std::numeric_limits<double>::epsilon() * norm / static_cast<double>(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= threshold) {
                    a(p, q) = a(q, p) = Scalar(0);
                    continue;
                }
                rotated = true;
                Eigen::JacobiRotation<Scalar> rot;
                rot.makeJacobi(a, p, q);
                a.applyOnTheLeft(p, q, rot.adjoint());
                a.applyOnTheRight(p, q, rot);
                v.applyOnTheRight(p, q, rot);
                a(p, q) = a(q, p) = Scalar(0);
            }
        }
        if (!rotated) return;
    }
    throw NumericalError(Failure::NotConverged,
                         "Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) +
                             " sweeps");
}

} // namespace detail

// Largest entrywise deviation from Hermitian symmetry.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a)
{
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol)
{
    return a.rows() == a.cols() && hermitian_defect(a) <= tol * std::max(1.0, a.norm());
}

/// Eigendecomposition of a Hermitian (real symmetric or complex Hermitian) matrix by cyclic
/// Jacobi rotations.
///
/// Eigenvalues come back ascending. Within a group of equal eigenvalues (|Δλ| below
/// eig_tol·‖A‖_F) columns are ordered by the index of their first significant
/// component and then by that component's phase; every column is finally rotated so that
/// component is real and positive. Complex input whose imaginary part is exactly zero is
/// solved in real arithmetic.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& input,
                                                           const Tolerances& tol = {})
{
    using Scalar = typename Derived::Scalar;
    if (input.rows() != input.cols()) {
        throw std::invalid_argument("hermitian_eig: matrix is " + std::to_string(input.rows()) +
                                    "x" + std::to_string(input.cols()) + ", not square");
    }
    if (!is_hermitian(input, tol.hermitian)) {
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (defect " +
                                    std::to_string(hermitian_defect(input)) + ")");
    }
    if constexpr (detail::is_complex<Scalar>::value) {
        if (input.size() > 0 && input.imag().cwiseAbs().maxCoeff() == 0.0) {
            RealMatrix real_part = input.real();
            auto real = hermitian_eig(real_part, tol);
            return {std::move(real.eigenvalues), real.eigenvectors.template cast<Scalar>()};
        }
    }

    const Eigen::Index n = input.rows();
    // Symmetrize exactly so rounding in the input cannot leak into the rotations.
    DenseMatrix<Scalar> a = (input + input.adjoint()) * 0.5;
    DenseMatrix<Scalar> v;
    detail::cyclic_jacobi(a, v, tol.max_sweeps);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::vector<double> values(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = std::real(a(i, i));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return values[static_cast<std::size_t>(x)] < values[static_cast<std::size_t>(y)];
    });

    std::vector<double> ascending(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        ascending[k] = values[static_cast<std::size_t>(order[k])];
    }
    // Relative, so uniformly tiny spectra (scaled families) are not one big tie group.
    const double tie = tol.eig * input.norm();
    for (std::size_t begin = 0; begin < order.size();) {
        std::size_t end = begin + 1;
        while (end < order.size() &&
               values[static_cast<std::size_t>(order[end])] -
                       values[static_cast<std::size_t>(order[end - 1])] <=
                   tie) {
            ++end;
        }
        if (end - begin > 1) {
            std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                             order.begin() + static_cast<std::ptrdiff_t>(end),
                             [&](Eigen::Index x, Eigen::Index y) {
                                 const auto ix = detail::first_significant(v, x);
                                 const auto iy = detail::first_significant(v, y);
                                 if (ix != iy) return ix < iy;
                                 if (ix == v.rows()) return false;
                                 return detail::phase_of(v(ix, x)) < detail::phase_of(v(iy, y));
                             });
        }
        begin = end;
    }

    EigenDecomposition<Scalar> out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = ascending[static_cast<std::size_t>(k)];
        auto col = out.eigenvectors.col(k);
        col = v.col(src);
        col.normalize();
        const Eigen::Index lead = detail::first_significant(out.eigenvectors, k);
        if (lead < n) {
            const Scalar c = col(lead);
            col *= std::abs(c) / c;
        }
    }
    return out;
}

/// Solves (A - zI) X = B with a partially pivoted LU factorization.
///
/// A vanishing pivot, or a residual that stays above solve_tol·‖B‖_F after one step of
/// iterative refinement, means z sits on the spectrum to working precision and raises
/// Failure::ContourTouchesSpectrum.
template <typename DerivedA, typename DerivedB>
ComplexMatrix solve_shifted(const Eigen::MatrixBase<DerivedA>& a, Complex z,
                            const Eigen::MatrixBase<DerivedB>& b, const Tolerances& tol = {})
{
    if (a.rows() != a.cols() || b.rows() != a.rows()) {
        throw std::invalid_argument("solve_shifted: shape mismatch");
    }
    const Eigen::Index n = a.rows();
    ComplexMatrix shifted = a.template cast<Complex>();
    shifted.diagonal().array() -= z;
    const ComplexMatrix rhs = b.template cast<Complex>();
    if (n == 0) return rhs;

    Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
    const double scale = shifted.cwiseAbs().maxCoeff();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (scale == 0.0 || min_pivot <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw NumericalError(Failure::ContourTouchesSpectrum,
                             "shift z=(" + std::to_string(z.real()) + "," +
                                 std::to_string(z.imag()) + ") is singular to working precision");
    }
    ComplexMatrix x = lu.solve(rhs);
    const double rhs_norm = rhs.norm();
    ComplexMatrix residual = rhs - shifted * x;
    if (residual.norm() > 0.1 * tol.solve * rhs_norm) {
        x += lu.solve(residual);
        residual = rhs - shifted * x;
    }
    if (residual.norm() > tol.solve * rhs_norm) {
        throw NumericalError(Failure::ContourTouchesSpectrum,
                             "resolvent solve residual " + std::to_string(residual.norm()) +
                                 " exceeds tolerance");
    }
    return x;
}

/// Count of singular values above `tol`.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& a, double tol)
{
    if (!(tol > 0.0)) throw std::invalid_argument("numerical_rank: tol must be positive");
    if (a.size() == 0) return 0;
    using Plain = typename Derived::PlainObject;
    const Eigen::BDCSVD<Plain> svd(a.eval());
    return (svd.singularValues().array() > tol).count();
}

/// Spectral norm (largest singular value).
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a)
{
    if (a.size() == 0) return 0.0;
    using Plain = typename Derived::PlainObject;
    const Eigen::BDCSVD<Plain> svd(a.eval());
    return svd.singularValues()(0);
}

/// Smallest principal angle between span{v} and span{w}.
template <typename DerivedV, typename DerivedW>
double subspace_angle(const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedW>& w)
{
    const double c = std::abs(v.normalized().dot(w.normalized()));
    return std::acos(std::min(1.0, c));
}

} // namespace specbranch
