#include "specbranch/family.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace specbranch {

HermitianFamily::HermitianFamily(std::string name, Eigen::Index dimension, MatrixFunction eval,
                                 MatrixFunction derivative, MatrixFunction second_derivative,
                                 double prefactor)
    : name_(std::move(name)),
      dimension_(dimension),
      eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      second_derivative_(std::move(second_derivative)),
      prefactor_(prefactor)
{
    if (dimension_ < 1) throw std::invalid_argument("family dimension must be positive");
    if (!eval_) throw std::invalid_argument("family needs an evaluation function");
    if (!(prefactor_ > 0.0) || !std::isfinite(prefactor_)) {
        throw std::invalid_argument("family prefactor must be a positive finite number");
    }
}

HermitianFamily& HermitianFamily::set_steps(FiniteDifferenceSteps steps)
{
    if (!(steps.first > 0.0) || !(steps.second > 0.0)) {
        throw std::invalid_argument("finite-difference steps must be positive");
    }
    steps_ = steps;
    return *this;
}

HermitianFamily& HermitianFamily::set_tolerances(const Tolerances& tol)
{
    tolerances_ = tol;
    return *this;
}

namespace {

void check_shape(const ComplexMatrix& m, Eigen::Index dimension, const std::string& name,
                 double t)
{
    if (m.rows() != dimension || m.cols() != dimension) {
        std::ostringstream msg;
        msg << "family '" << name << "' returned a " << m.rows() << "x" << m.cols()
            << " matrix at t=" << t << ", expected " << dimension << "x" << dimension;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

ComplexMatrix HermitianFamily::eval(double t) const
{
    ComplexMatrix m = eval_(t);
    check_shape(m, dimension_, name_, t);
    if (!is_hermitian(m, tolerances_.hermitian)) {
        std::ostringstream msg;
        msg << "family '" << name_ << "' is not Hermitian at t=" << t << " (defect "
            << hermitian_defect(m) << ")";
        throw std::invalid_argument(msg.str());
    }
    return m;
}

ComplexMatrix HermitianFamily::derivative(double t) const
{
    if (derivative_) {
        ComplexMatrix d = derivative_(t);
        check_shape(d, dimension_, name_, t);
        return d;
    }
    return central_difference(*this, t, steps_.first * std::max(1.0, std::abs(t)));
}

ComplexMatrix HermitianFamily::second_derivative(double t) const
{
    if (second_derivative_) {
        ComplexMatrix d = second_derivative_(t);
        check_shape(d, dimension_, name_, t);
        return d;
    }
    const double h = steps_.second * std::max(1.0, std::abs(t));
    ComplexMatrix d = (eval(t + h) - 2.0 * eval(t) + eval(t - h)) / (h * h);
    return (d + d.adjoint()) * 0.5;
}

ComplexMatrix central_difference(const HermitianFamily& family, double t, double h)
{
    ComplexMatrix d = (family.eval(t + h) - family.eval(t - h)) / (2.0 * h);
    return (d + d.adjoint()) * 0.5;
}

MatrixFunction derivative_family(const HermitianFamily& family)
{
    return [family](double t) { return family.derivative(t); };
}

double graph_norm(const HermitianFamily& family, double t, const ComplexVector& u)
{
    if (u.size() != family.dimension()) {
        throw std::invalid_argument("graph_norm: vector length " + std::to_string(u.size()) +
                                    " does not match dimension " +
                                    std::to_string(family.dimension()));
    }
    const ComplexVector au = family.physical(t) * u;
    return std::sqrt(u.squaredNorm() + au.squaredNorm());
}

namespace {

// (I + A²)^{-1/2} for Hermitian A.
ComplexMatrix inverse_sqrt_gram(const ComplexMatrix& a, const Tolerances& tol)
{
    const auto eig = hermitian_eig(a, tol);
    const RealVector weights =
        (1.0 + eig.eigenvalues.array().square()).rsqrt().matrix();
    return eig.eigenvectors * weights.asDiagonal() * eig.eigenvectors.adjoint();
}

} // namespace

double graph_norm_equivalence_ratio(const HermitianFamily& family, double s, double t,
                                    int samples, std::uint64_t seed)
{
    if (samples < 1) throw std::invalid_argument("graph_norm_equivalence_ratio: samples < 1");
    const ComplexMatrix as = family.physical(s);
    const ComplexMatrix at = family.physical(t);
    const Eigen::Index m = family.dimension();

    auto ratio = [&](const ComplexVector& u) {
        const double ns = std::sqrt(u.squaredNorm() + (as * u).squaredNorm());
        const double nt = std::sqrt(u.squaredNorm() + (at * u).squaredNorm());
        return nt / ns;
    };

    const ComplexMatrix w = inverse_sqrt_gram(as, family.tolerances());
    const ComplexMatrix gram_t = ComplexMatrix::Identity(m, m) + at.adjoint() * at;
    ComplexMatrix pencil = w * gram_t * w;
    pencil = (pencil + pencil.adjoint()) * 0.5;
    const auto eig = hermitian_eig(pencil, family.tolerances());
    double best = ratio(w * eig.eigenvectors.col(m - 1));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < samples; ++k) {
        ComplexVector u(m);
        for (Eigen::Index i = 0; i < m; ++i) u(i) = Complex(normal(rng), normal(rng));
        if (u.norm() == 0.0) continue;
        best = std::max(best, ratio(u));
    }
    return best;
}

double graph_operator_norm(const HermitianFamily& family, double t)
{
    const ComplexMatrix a = family.physical(t);
    const ComplexMatrix d = family.physical_derivative(t);
    return operator_norm(d * inverse_sqrt_gram(a, family.tolerances()));
}

HermitianFamily make_expression_family(const ExprMatrixSpec& spec, std::string name)
{
    const Eigen::Index m = spec.dimension;
    if (m < 1) throw std::invalid_argument("expression matrix dimension must be positive");
    const auto count = static_cast<Eigen::Index>(spec.entries.size());
    const bool full = count == m * m;
    if (!full && count != m * (m + 1) / 2) {
        throw std::invalid_argument("expression matrix of dimension " + std::to_string(m) +
                                    " needs " + std::to_string(m * (m + 1) / 2) +
                                    " upper-triangle entries or " + std::to_string(m * m) +
                                    " full entries, got " + std::to_string(count));
    }

    struct Cell {
        Expression expr;
        bool present = false;
    };
    auto upper = std::make_shared<std::vector<Cell>>(static_cast<std::size_t>(m * m));
    auto lower = std::make_shared<std::vector<Cell>>(static_cast<std::size_t>(m * m));
    std::size_t next = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!full && j < i) continue;
            const std::string& src = spec.entries[next++];
            const auto idx = static_cast<std::size_t>(i * m + j);
            if (j >= i) {
                (*upper)[idx] = {parse_expression(src), true};
                if (i == j && (*upper)[idx].expr.uses_imaginary_unit()) {
                    throw std::invalid_argument("diagonal entry (" + std::to_string(i) + "," +
                                                std::to_string(i) + ") '" + src +
                                                "' uses the imaginary unit; Hermitian diagonals "
                                                "must be real");
                }
            } else if (src != "*") {
                (*lower)[idx] = {parse_expression(src), true};
            }
        }
    }

    const double hermitian_tol = Tolerances{}.hermitian;
    auto eval = [m, upper, lower, hermitian_tol](double t) {
        ComplexMatrix a(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i; j < m; ++j) {
                const Complex v = (*upper)[static_cast<std::size_t>(i * m + j)].expr.evaluate(t);
                if (i == j) {
                    if (std::abs(v.imag()) > hermitian_tol * (1.0 + std::abs(v.real()))) {
                        std::ostringstream msg;
                        msg << "diagonal entry (" << i << "," << i << ") is not real at t=" << t;
                        throw std::invalid_argument(msg.str());
                    }
                    a(i, i) = v.real();
                    continue;
                }
                a(i, j) = v;
                a(j, i) = std::conj(v);
                const Cell& mirror = (*lower)[static_cast<std::size_t>(j * m + i)];
                if (mirror.present) {
                    const Complex w = mirror.expr.evaluate(t);
                    if (std::abs(w - std::conj(v)) > hermitian_tol * (1.0 + std::abs(v))) {
                        std::ostringstream msg;
                        msg << "entry (" << j << "," << i << ") is not the conjugate of entry ("
                            << i << "," << j << ") at t=" << t;
                        throw std::invalid_argument(msg.str());
                    }
                }
            }
        }
        return a;
    };

    HermitianFamily family(std::move(name), m, eval);
    std::ostringstream entries;
    for (std::size_t k = 0; k < spec.entries.size(); ++k) {
        entries << (k ? ", " : "") << spec.entries[k];
    }
    family.params["dimension"] = std::to_string(m);
    family.params["entries"] = entries.str();
    return family;
}

} // namespace specbranch
