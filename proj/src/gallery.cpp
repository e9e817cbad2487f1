#include "specbranch/gallery.hpp"

#include <sstream>

namespace specbranch {

namespace {

void check_window_index(int n)
{
    // 2^{-n²} must stay a normal double.
    if (n < 1 || n > 31) throw std::invalid_argument("curve-lemma window index must be in 1..31");
}

ComplexMatrix two_by_two(double d, double off)
{
    ComplexMatrix a(2, 2);
    a << d, off, off, -d;
    return a;
}

// Physical A_n(s).
ComplexMatrix window_matrix(int n, double s)
{
    const double pre = curve_lemma_prefactor(n);
    return two_by_two(pre, pre * (s / curve_lemma_scale(n)));
}

double smooth_step(double tau)
{
    auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double a = f(tau), b = f(1.0 - tau);
    return a / (a + b);
}

double smooth_step_slope(double tau)
{
    auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    auto df = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; };
    const double a = f(tau), b = f(1.0 - tau);
    return (df(tau) * b + a * df(1.0 - tau)) / ((a + b) * (a + b));
}

ComplexMatrix window_slope(int n)
{
    return std::ldexp(1.0, -n) * two_by_two(0.0, 1.0);
}

} // namespace

double curve_lemma_center(int n)
{
    check_window_index(n);
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += 1.0 / (static_cast<double>(k) * k);
    return 4.0 * sum;
}

double curve_lemma_halfwidth(int n)
{
    check_window_index(n);
    return 1.0 / (static_cast<double>(n) * n);
}

double curve_lemma_scale(int n)
{
    check_window_index(n);
    return std::ldexp(1.0, n - n * n);
}

double curve_lemma_prefactor(int n)
{
    check_window_index(n);
    return std::ldexp(1.0, -n * n);
}

HermitianFamily curve_lemma_window(int n)
{
    const double sn = curve_lemma_scale(n);
    HermitianFamily family(
        "curve-lemma-window", 2, [sn](double s) { return two_by_two(1.0, s / sn); },
        [sn](double) { return two_by_two(0.0, 1.0 / sn); },
        [](double) { return two_by_two(0.0, 0.0); }, curve_lemma_prefactor(n));
    family.params["n"] = std::to_string(n);
    return family;
}

HermitianFamily curve_lemma_unit_window(int n)
{
    HermitianFamily family(
        "curve-lemma-unit-window", 2, [](double u) { return two_by_two(1.0, u); },
        [](double) { return two_by_two(0.0, 1.0); }, [](double) { return two_by_two(0.0, 0.0); },
        curve_lemma_prefactor(n));
    family.params["n"] = std::to_string(n);
    return family;
}

HermitianFamily curve_lemma_family(int n_max)
{
    if (n_max < 2) throw std::invalid_argument("curve-lemma n_max must be at least 2");
    check_window_index(n_max);
    std::vector<double> center(static_cast<std::size_t>(n_max) + 1), half(center.size());
    for (int n = 2; n <= n_max; ++n) {
        center[static_cast<std::size_t>(n)] = curve_lemma_center(n);
        half[static_cast<std::size_t>(n)] = curve_lemma_halfwidth(n);
    }
    // Which piece t falls in: a window n (blend = false) or the blend from n to n+1 on (a, b).
    struct Piece {
        int n;
        bool blend;
        double a, b;
    };
    auto locate = [n_max, center, half](double t) -> Piece {
        auto c = [&](int n) { return center[static_cast<std::size_t>(n)]; };
        auto w = [&](int n) { return half[static_cast<std::size_t>(n)]; };
        for (int n = 2; n < n_max; ++n) {
            const double a = c(n) + w(n), b = c(n + 1) - w(n + 1);
            if (t <= a) return {n, false, 0.0, 0.0};
            if (t < b) return {n, true, a, b};
        }
        return {n_max, false, 0.0, 0.0};
    };
    auto eval = [locate, center](double t) -> ComplexMatrix {
        const Piece p = locate(t);
        auto local = [&](int n) { return t - center[static_cast<std::size_t>(n)]; };
        if (!p.blend) return window_matrix(p.n, local(p.n));
        const double phi = smooth_step((t - p.a) / (p.b - p.a));
        return (1.0 - phi) * window_matrix(p.n, local(p.n)) +
               phi * window_matrix(p.n + 1, local(p.n + 1));
    };
    auto derivative = [locate, center](double t) -> ComplexMatrix {
        const Piece p = locate(t);
        auto local = [&](int n) { return t - center[static_cast<std::size_t>(n)]; };
        if (!p.blend) return window_slope(p.n);
        const double tau = (t - p.a) / (p.b - p.a);
        const double phi = smooth_step(tau);
        const double dphi = smooth_step_slope(tau) / (p.b - p.a);
        return dphi * (window_matrix(p.n + 1, local(p.n + 1)) - window_matrix(p.n, local(p.n))) +
               (1.0 - phi) * window_slope(p.n) + phi * window_slope(p.n + 1);
    };
    HermitianFamily family("curve-lemma", 2, eval, derivative);
    family.params["n_max"] = std::to_string(n_max);
    return family;
}

HolderQuotient holder_quotient(int n, double alpha, bool use_prefactor)
{
    check_window_index(n);
    if (!(alpha > 0.0)) throw std::invalid_argument("holder_quotient: alpha must be positive");
    const double sn = curve_lemma_scale(n);
    HolderQuotient q;
    q.n = n;
    q.alpha = alpha;
    q.closed_form = std::exp2(n * (alpha * (n - 1) - 1)) / std::sqrt(2.0);

    // 41-point grid on [-1, 1] (unit window) or [-s_n, s_n]: index 20 is s = 0, 40 is s = s_n.
    if (use_prefactor) {
        const BranchSet branches = track_branches(curve_lemma_unit_window(n), -1.0, 1.0, 41);
        const double jump = branches.derivs(40, 1) - branches.derivs(20, 1);
        // prefactor/s_n = 2^{-n}, s_n^{-α} = 2^{-α(n-n²)}
        q.numerical = jump * std::exp2(-n - alpha * (n - n * n));
    } else {
        if (n > 15) {
            throw NumericalError(Failure::Underflow,
                                 "window " + std::to_string(n) +
                                     " needs prefactor handling (2^{-n²} scales)");
        }
        const double pre = curve_lemma_prefactor(n);
        HermitianFamily physical(
            "curve-lemma-window", 2, [n](double s) { return window_matrix(n, s); },
            [pre, sn](double) { return two_by_two(0.0, pre / sn); });
        const BranchSet branches = track_branches(physical, -sn, sn, 41);
        q.numerical = (branches.derivs(40, 1) - branches.derivs(20, 1)) / std::pow(sn, alpha);
    }

    auto slope = [n, sn](double t) {
        return std::ldexp(1.0, n * n - 2 * n) * t / std::sqrt(1.0 + (t / sn) * (t / sn));
    };
    q.analytic = (slope(sn) - slope(0.0)) / std::exp2(alpha * (n - n * n));
    q.relative_difference = std::abs(q.numerical - q.closed_form) / std::abs(q.closed_form);
    return q;
}

double eigenvector_jump(const ComplexMatrix& a, const ComplexMatrix& b)
{
    const auto ea = hermitian_eig(a);
    const auto eb = hermitian_eig(b);
    return subspace_angle(ea.eigenvectors.col(a.cols() - 1), eb.eigenvectors.col(b.cols() - 1));
}

double eigenvector_jump(int n)
{
    return eigenvector_jump(window_matrix(n, 0.0), window_matrix(n, curve_lemma_scale(n)));
}

Bump standard_bump()
{
    Bump bump;
    bump.value = [](double s) {
        if (s <= 0.0 || s >= 2.0) return 0.0;
        const double q = 1.0 - (s - 1.0) * (s - 1.0);
        return std::exp(1.0 - 1.0 / q);
    };
    bump.derivative = [](double s) {
        if (s <= 0.0 || s >= 2.0) return 0.0;
        const double q = 1.0 - (s - 1.0) * (s - 1.0);
        return std::exp(1.0 - 1.0 / q) * (-2.0 * (s - 1.0) / (q * q));
    };
    return bump;
}

HermitianFamily resolvent_example_family(int m, const Bump& bump)
{
    if (m < 1) throw std::invalid_argument("resolvent example needs m >= 1");
    if (!bump.value || !bump.derivative) throw std::invalid_argument("bump needs value and derivative");
    auto eval = [m, bump](double t) {
        ComplexMatrix a = ComplexMatrix::Zero(m, m);
        for (int k = 1; k <= m; ++k) a(k - 1, k - 1) = k + bump.value(k * t);
        return a;
    };
    auto deriv = [m, bump](double t) {
        ComplexMatrix a = ComplexMatrix::Zero(m, m);
        for (int k = 1; k <= m; ++k) a(k - 1, k - 1) = k * bump.derivative(k * t);
        return a;
    };
    HermitianFamily family("resolvent-example", m, eval, deriv);
    family.params["m"] = std::to_string(m);
    return family;
}

ResolventQuotient resolvent_weak_vs_norm(int m, double t, int K, const Bump& bump)
{
    if (m < 1) throw std::invalid_argument("resolvent_weak_vs_norm: m must be at least 1");
    if (K < 1) throw std::invalid_argument("resolvent_weak_vs_norm: K must be at least 1");
    if (t == 0.0 || !std::isfinite(t)) throw std::invalid_argument("resolvent_weak_vs_norm: t must be nonzero");
    // μ_k(t) = (B_k(t) - B_k(0))/t - B_k'(0) with B_k(t) = 1 + λ_1(k t)/k, written without the
    // constant 1 so equal arguments k t give bit-equal values.
    RealVector mu(m);
    for (int k = 1; k <= m; ++k) {
        const double s = k * t;
        mu(k - 1) = (bump.value(s) - bump.value(0.0)) / s - bump.derivative(0.0);
    }
    ResolventQuotient q;
    q.t = t;
    q.norm_quotient = operator_norm(RealMatrix(mu.asDiagonal()));
    q.pointwise_max = mu.head(std::min(K, m)).cwiseAbs().maxCoeff();
    return q;
}

HermitianFamily schrodinger_family(const std::string& potential, int m)
{
    if (m < 3) throw std::invalid_argument("schrodinger needs m >= 3 interior points");
    const Expression v = parse_expression(potential, true);
    const double h = 1.0 / (m + 1);
    const double fd = FiniteDifferenceSteps{}.first;

    auto potential_at = [v](double t, double x) {
        const Complex value = v.evaluate(t, x);
        if (value.imag() != 0.0) {
            std::ostringstream msg;
            msg << "potential is not real at t=" << t << ", x=" << x;
            throw std::invalid_argument(msg.str());
        }
        return value.real();
    };
    auto eval = [m, h, potential_at](double t) {
        ComplexMatrix a = ComplexMatrix::Zero(m, m);
        const double inv_h2 = 1.0 / (h * h);
        for (int i = 0; i < m; ++i) {
            a(i, i) = 2.0 * inv_h2 + potential_at(t, (i + 1) * h);
            if (i + 1 < m) a(i, i + 1) = a(i + 1, i) = -inv_h2;
        }
        return a;
    };
    auto deriv = [m, h, fd, potential_at](double t) {
        ComplexMatrix a = ComplexMatrix::Zero(m, m);
        const double step = fd * std::max(1.0, std::abs(t));
        for (int i = 0; i < m; ++i) {
            const double x = (i + 1) * h;
            a(i, i) = (potential_at(t + step, x) - potential_at(t - step, x)) / (2.0 * step);
        }
        return a;
    };
    HermitianFamily family("schrodinger", m, eval, deriv);
    family.params["m"] = std::to_string(m);
    family.params["potential"] = potential;
    return family;
}

BranchSet schrodinger_track(const std::string& potential, int m, double t0, double t1,
                            Eigen::Index grid_size, const TrackerOptions& options)
{
    return track_branches(schrodinger_family(potential, m), t0, t1, grid_size, options);
}

} // namespace specbranch
