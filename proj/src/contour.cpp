#include "specbranch/contour.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <sstream>

#include "specbranch/parallel.hpp"

namespace specbranch {

void check_separation(const Contour& gamma, const RealVector& spectrum, double margin)
{
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        if (gamma.clearance(spectrum(i)) < margin * gamma.radius) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "eigenvalue " << spectrum(i) << " is within " << margin
                << "·radius of the circle (center " << gamma.center.real() << ", radius "
                << gamma.radius << ")";
            throw NumericalError(Failure::ContourTouchesSpectrum, msg.str());
        }
    }
}

namespace {

struct NodeSums {
    ComplexMatrix projector;
    std::vector<Complex> power;
    std::vector<Complex> local;
};

// Raw sums Σ w_k R_k and Σ w_k z_k^p Tr R_k over the nodes k = first, first+stride, ... < m
// of the m-point rule, w_k = r e^{iθ_k}.
NodeSums node_sums(const ComplexMatrix& a, const Contour& gamma, int p_max, int m, int first,
                   int stride, const Tolerances& tol)
{
    const auto count = static_cast<std::size_t>((m - first + stride - 1) / stride);
    const Eigen::Index dim = a.rows();
    std::vector<NodeSums> parts(count);
    parallel_for(count, [&](std::size_t j) {
        const int k = first + static_cast<int>(j) * stride;
        const double theta = 2.0 * M_PI * k / m;
        const Complex w = gamma.radius * Complex(std::cos(theta), std::sin(theta));
        const Complex z = gamma.center + w;
        const ComplexMatrix r = solve_shifted(a, z, ComplexMatrix::Identity(dim, dim), tol);
        NodeSums& part = parts[j];
        part.projector = w * r;
        part.power.resize(static_cast<std::size_t>(p_max + 1));
        part.local.resize(static_cast<std::size_t>(p_max + 1));
        const Complex trace = r.trace();
        Complex zp{1.0, 0.0};
        for (int p = 0; p <= p_max; ++p) {
            part.power[static_cast<std::size_t>(p)] = w * zp * trace;
            part.local[static_cast<std::size_t>(p)] =
                w * Complex(std::cos(p * theta), std::sin(p * theta)) * trace;
            zp *= z;
        }
    });

    NodeSums total{ComplexMatrix::Zero(dim, dim),
                   std::vector<Complex>(static_cast<std::size_t>(p_max + 1)),
                   std::vector<Complex>(static_cast<std::size_t>(p_max + 1))};
    for (const auto& part : parts) {
        total.projector += part.projector;
        for (std::size_t p = 0; p < part.power.size(); ++p) {
            total.power[p] += part.power[p];
            total.local[p] += part.local[p];
        }
    }
    return total;
}

} // namespace

ResolventIntegral integrate_resolvent(const ComplexMatrix& a, const Contour& gamma, int p_max,
                                      const ContourOptions& options)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("integrate_resolvent: matrix not square");
    if (!(gamma.radius > 0.0)) throw std::invalid_argument("contour radius must be positive");
    if (gamma.nodes < 8) throw std::invalid_argument("contour needs at least 8 nodes");
    if (p_max < 0) throw std::invalid_argument("integrate_resolvent: p_max < 0");

    int m = gamma.nodes;
    NodeSums raw = node_sums(a, gamma, p_max, m, 0, 1, options.tol);
    auto scaled = [&](const NodeSums& sums, int nodes) {
        ResolventIntegral out;
        out.projector = sums.projector * (-1.0 / nodes);
        out.power_sums.resize(sums.power.size());
        out.local_sums.resize(sums.local.size());
        for (std::size_t p = 0; p < sums.power.size(); ++p) {
            out.power_sums[p] = sums.power[p] * (-1.0 / nodes);
            out.local_sums[p] = sums.local[p] * (-1.0 / nodes);
        }
        out.nodes = nodes;
        return out;
    };
    ResolventIntegral previous = scaled(raw, m);

    while (2 * m <= options.max_nodes) {
        const NodeSums odd = node_sums(a, gamma, p_max, 2 * m, 1, 2, options.tol);
        raw.projector += odd.projector;
        for (std::size_t p = 0; p < raw.power.size(); ++p) {
            raw.power[p] += odd.power[p];
            raw.local[p] += odd.local[p];
        }
        m *= 2;
        ResolventIntegral current = scaled(raw, m);
        current.change = (current.projector - previous.projector).norm();
        bool converged = current.change <= options.proj_tol;
        for (std::size_t p = 0; converged && p < current.power_sums.size(); ++p) {
            const double delta = std::abs(current.power_sums[p] - previous.power_sums[p]);
            const double local = std::abs(current.local_sums[p] - previous.local_sums[p]);
            converged = delta <= options.proj_tol * (1.0 + std::abs(current.power_sums[p])) &&
                        local <= options.proj_tol * (1.0 + std::abs(current.local_sums[p]));
        }
        if (converged) return current;
        previous = std::move(current);
    }
    std::ostringstream msg;
    msg << "projector still changes by " << previous.change << " at " << m
        << " nodes (tolerance " << options.proj_tol << ")";
    throw NumericalError(Failure::QuadratureNotConverged, msg.str());
}

ComplexMatrix riesz_projector(const ComplexMatrix& a, const Contour& gamma,
                              const ContourOptions& options)
{
    return integrate_resolvent(a, gamma, 0, options).projector;
}

namespace {

ComplexMatrix checked_matrix(const HermitianFamily& family, double t, const Contour& gamma,
                             const ContourOptions& options)
{
    ComplexMatrix a = family.eval(t);
    if (options.check_separation) {
        check_separation(gamma, hermitian_eig(a, family.tolerances()).eigenvalues,
                         options.separation_margin);
    }
    return a;
}

} // namespace

ComplexMatrix riesz_projector(const HermitianFamily& family, double t, const Contour& gamma,
                              const ContourOptions& options)
{
    return riesz_projector(checked_matrix(family, t, gamma, options), gamma, options);
}

namespace {

std::vector<double> real_sums(const std::vector<Complex>& sums)
{
    std::vector<double> out(sums.size());
    for (std::size_t p = 0; p < sums.size(); ++p) {
        const Complex s = sums[p];
        if (std::abs(s.imag()) > 1e-8 * (1.0 + std::abs(s))) {
            std::ostringstream msg;
            msg << "Newton sum s_" << p << " has imaginary part " << s.imag();
            throw NumericalError(Failure::QuadratureNotConverged, msg.str());
        }
        out[p] = s.real();
    }
    return out;
}

} // namespace

std::vector<double> newton_sums(const ComplexMatrix& a, const Contour& gamma, int p_max,
                                const ContourOptions& options)
{
    return real_sums(integrate_resolvent(a, gamma, p_max, options).power_sums);
}

std::vector<double> newton_sums(const HermitianFamily& family, double t, const Contour& gamma,
                                int p_max, const ContourOptions& options)
{
    return newton_sums(checked_matrix(family, t, gamma, options), gamma, p_max, options);
}

std::vector<double> newton_to_sigma(const std::vector<double>& s, int n)
{
    if (n < 0) throw std::invalid_argument("newton_to_sigma: N < 0");
    if (s.size() < static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument("newton_to_sigma: need s_0..s_N");
    }
    if (std::abs(s[0] - n) > 1e-8) {
        throw std::invalid_argument("newton_to_sigma: s_0 = " + std::to_string(s[0]) +
                                    " does not equal N = " + std::to_string(n));
    }
    // e_0 = 1, k e_k = Σ_{i=1}^{k} (-1)^{i-1} e_{k-i} s_i.
    std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) {
            const double term = e[static_cast<std::size_t>(k - i)] * s[static_cast<std::size_t>(i)];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[static_cast<std::size_t>(k)] = acc / k;
    }
    return {e.begin() + 1, e.end()};
}

std::vector<double> cluster_eigenvalues(const std::vector<double>& sigma, int n)
{
    if (n < 0 || sigma.size() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("cluster_eigenvalues: need σ_1..σ_N");
    }
    if (n == 0) return {};
    if (n == 1) return {sigma[0]};

    // Companion matrix of x^N + c_1 x^{N-1} + ... + c_N with c_j = (-1)^j σ_j.
    RealMatrix companion = RealMatrix::Zero(n, n);
    for (int j = 1; j <= n; ++j) {
        const double c = (j % 2 == 1 ? -1.0 : 1.0) * sigma[static_cast<std::size_t>(j - 1)];
        companion(0, j - 1) = -c;
    }
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

    const Eigen::EigenSolver<RealMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError(Failure::NotConverged, "companion eigensolver failed");
    }
    const Eigen::VectorXcd roots = solver.eigenvalues();
    const double bound = 1e-6 * (1.0 + roots.cwiseAbs().maxCoeff());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (std::abs(roots(i).imag()) > bound) {
            std::ostringstream msg;
            msg << "root " << roots(i).real() << (roots(i).imag() < 0 ? "" : "+")
                << roots(i).imag() << "i is not real to tolerance " << bound;
            throw NumericalError(Failure::RootsNotReal, msg.str());
        }
        out[static_cast<std::size_t>(i)] = roots(i).real();
    }
    std::sort(out.begin(), out.end());
    return out;
}

int projector_rank(const ComplexMatrix& p)
{
    return static_cast<int>(numerical_rank(p, 0.5));
}

SpectralCluster spectral_cluster(const HermitianFamily& family, double t, const Contour& gamma,
                                 const ContourOptions& options)
{
    const ComplexMatrix a = checked_matrix(family, t, gamma, options);
    ResolventIntegral first = integrate_resolvent(a, gamma, 0, options);
    SpectralCluster cluster;
    cluster.t = t;
    cluster.rank = projector_rank(first.projector);
    const ResolventIntegral full = integrate_resolvent(a, gamma, 2 * cluster.rank, options);
    cluster.projector = full.projector;
    cluster.nodes = full.nodes;
    cluster.newton_sums = real_sums(full.power_sums);
    cluster.local_sums = real_sums(full.local_sums);
    cluster.sigma = newton_to_sigma(cluster.newton_sums, cluster.rank);
    const std::vector<double> roots =
        cluster_eigenvalues(newton_to_sigma(cluster.local_sums, cluster.rank), cluster.rank);
    for (double w : roots) cluster.eigenvalues.push_back(gamma.center.real() + gamma.radius * w);
    return cluster;
}

LowRankTrace lowrank_trace(const ComplexMatrix& t, int n, const ComplexMatrix& reference)
{
    if (t.rows() != t.cols() || reference.rows() != t.rows() || reference.cols() != t.cols()) {
        throw std::invalid_argument("lowrank_trace: shape mismatch");
    }
    if (n < 0) throw std::invalid_argument("lowrank_trace: N < 0");
    const Eigen::Index m = t.rows();
    auto rank_tol = [](const ComplexMatrix& x) {
        return 1e-10 * std::max(1.0, operator_norm(x));
    };
    const Eigen::Index rank = numerical_rank(t, rank_tol(t));
    if (rank > n) {
        throw NumericalError(Failure::RankDrift, "operator has rank " + std::to_string(rank) +
                                                     " > N = " + std::to_string(n));
    }

    const Eigen::BDCSVD<ComplexMatrix> svd(reference, Eigen::ComputeFullU);
    const Eigen::Index r = std::min<Eigen::Index>(
        (svd.singularValues().array() > rank_tol(reference)).count(), n);
    if (r == 0) return {Complex{0.0, 0.0}, ComplexMatrix::Zero(0, 0)};

    const ComplexMatrix f = svd.matrixU().leftCols(r);
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(f).householderQ();
    const ComplexMatrix g = q.rightCols(m - r);
    const ComplexMatrix a = f.adjoint() * t * f;
    const ComplexMatrix b = f.adjoint() * t * g;
    const ComplexMatrix c = g.adjoint() * t * f;
    const Eigen::FullPivLU<ComplexMatrix> lu(a);
    ComplexMatrix block = a;
    if (lu.rank() == r) {
        block += b * c * lu.inverse();
    } else if ((b * c).norm() > rank_tol(t)) {
        throw NumericalError(Failure::RankDrift,
                             "operator range is not spanned by the reference range");
    }
    return {block.trace(), block};
}

LowRankTrace lowrank_trace(const ComplexMatrix& t, int n)
{
    return lowrank_trace(t, n, t);
}

} // namespace specbranch
