#pragma once

// Independent reference computations for the tests. Everything here uses Eigen's own
// solvers (never the library's Jacobi code), or closed forms.

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <random>
#include <vector>

#include "specbranch/family.hpp"

namespace oracle {

using specbranch::Complex;
using specbranch::ComplexMatrix;
using specbranch::ComplexVector;
using specbranch::HermitianFamily;
using specbranch::RealVector;

inline RealVector eigenvalues(const ComplexMatrix& a)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline ComplexMatrix eigenvectors(const ComplexMatrix& a)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    return solver.eigenvectors();
}

inline ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(n(rng), n(rng));
    }
    return g;
}

inline ComplexMatrix random_hermitian(Eigen::Index m, std::mt19937_64& rng)
{
    const ComplexMatrix g = gaussian(m, m, rng);
    return (g + g.adjoint()) * 0.5;
}

// Haar-distributed: QR of a complex Gaussian with the phases of diag(R) divided out.
inline ComplexMatrix random_unitary(Eigen::Index m, std::mt19937_64& rng)
{
    Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(m, m, rng));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

inline ComplexMatrix with_spectrum(const ComplexMatrix& u, const RealVector& lambda)
{
    return u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
}

// exp(tK) for skew-Hermitian K = -iH, through the eigenbasis of H.
inline ComplexMatrix expm_skew(const ComplexMatrix& h, double t)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const ComplexMatrix& v = solver.eigenvectors();
    ComplexVector phase(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        phase(i) = std::exp(Complex(0.0, -t * solver.eigenvalues()(i)));
    }
    return v * phase.asDiagonal() * v.adjoint();
}

// A(t) = U(t) diag(c_i + b_i t) U(t)*, U(t) = exp(-i t H): eigenvalue curves are exactly the
// lines c_i + b_i t, and A'(t) = U (diag(b) - i[H, D]) U*.
struct LinearSpectrumFamily {
    ComplexMatrix h;
    RealVector c, b;

    RealVector lines(double t) const { return c + t * b; }

    HermitianFamily family(const std::string& name = "rotating-lines") const
    {
        auto self = *this;
        auto eval = [self](double t) -> ComplexMatrix {
            const ComplexMatrix u = expm_skew(self.h, t);
            return with_spectrum(u, self.lines(t));
        };
        auto derivative = [self](double t) -> ComplexMatrix {
            const ComplexMatrix u = expm_skew(self.h, t);
            const ComplexMatrix d = self.lines(t).cast<Complex>().asDiagonal();
            const ComplexMatrix commutator = self.h * d - d * self.h;
            const ComplexMatrix inner =
                self.b.cast<Complex>().asDiagonal().toDenseMatrix() - Complex(0.0, 1.0) * commutator;
            return u * inner * u.adjoint();
        };
        return HermitianFamily(name, h.rows(), eval, derivative);
    }
};

// Max over matched sorted entries; infinity on size mismatch.
inline double multiset_distance(std::vector<double> a, std::vector<double> b)
{
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline std::vector<double> to_vector(const RealVector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

} // namespace oracle
