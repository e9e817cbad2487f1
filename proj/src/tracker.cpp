#include "specbranch/tracker.hpp"

#include <limits>
#include <numeric>
#include <sstream>

#include "specbranch/parallel.hpp"

namespace specbranch {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

std::string format_t(double t)
{
    std::ostringstream out;
    out.precision(17);
    out << t;
    return out.str();
}

struct Sample {
    RealVector values;
    RealVector slopes;
};

Sample sample(const HermitianFamily& family, double t)
{
    const auto eig = hermitian_eig(family.eval(t), family.tolerances());
    const ComplexMatrix d = family.derivative(t);
    Sample s;
    s.values = eig.eigenvalues;
    s.slopes = (eig.eigenvectors.adjoint() * d * eig.eigenvectors).diagonal().real();
    return s;
}

RealVector eigenvalues_at(const HermitianFamily& family, double t)
{
    return hermitian_eig(family.eval(t), family.tolerances()).eigenvalues;
}

// Maximal runs lo..hi (hi > lo) of sorted values joined by gaps ≤ tol.
std::vector<std::pair<int, int>> clusters(const RealVector& values, double tol)
{
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(values.size());
    for (int lo = 0; lo < n;) {
        int hi = lo;
        while (hi + 1 < n && values(hi + 1) - values(hi) <= tol) ++hi;
        if (hi > lo) out.emplace_back(lo, hi);
        lo = hi + 1;
    }
    return out;
}

// 5-point one-sided stencils; f[0] at t, f[k] at t ± k h on the chosen side.
double stencil_first(const double* f, double h, Side side)
{
    const double d = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
                     (12.0 * h);
    return side == Side::Right ? d : -d;
}

double stencil_second(const double* f, double h)
{
    return (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) /
           (12.0 * h * h);
}

ComplexMatrix range_basis(const ComplexMatrix& projector, const Tolerances& tol)
{
    ComplexMatrix p = (projector + projector.adjoint()) * 0.5;
    const auto eig = hermitian_eig(p, tol);
    const Eigen::Index rank = (eig.eigenvalues.array() > 0.5).count();
    return eig.eigenvectors.rightCols(rank);
}

std::vector<double> compressed_from_projector(const HermitianFamily& family, double t,
                                              const ComplexMatrix& projector)
{
    const ComplexMatrix q = range_basis(projector, family.tolerances());
    ComplexMatrix block = q.adjoint() * family.derivative(t) * q;
    block = (block + block.adjoint()) * 0.5;
    const RealVector rho = hermitian_eig(block, family.tolerances()).eigenvalues;
    return {rho.data(), rho.data() + rho.size()};
}

struct StencilResult {
    std::vector<double> first[2];   // indexed by Side
    std::vector<double> second[2];
};

/// Probes the sorted eigenvalues lo..hi on the requested sides and returns one-sided
/// derivatives. Every probe (and t itself) must keep exactly hi-lo+1 eigenvalues inside gamma
/// with the margin, and the Riesz projector there must have that rank.
StencilResult probe_cluster(const HermitianFamily& family, double t, int lo, int hi,
                            const Contour& gamma, bool left, bool right, bool second,
                            const ContourOptions& options)
{
    const int size = hi - lo + 1;
    const double h1 = family.steps().first * std::max(1.0, std::abs(t));
    const double h2 = family.steps().second * std::max(1.0, std::abs(t));

    std::vector<double> offsets{0.0};
    for (int side = 0; side < 2; ++side) {
        if ((side == 0 && !left) || (side == 1 && !right)) continue;
        const double sign = side == 0 ? -1.0 : 1.0;
        for (int k = 1; k <= 4; ++k) offsets.push_back(sign * k * h1);
        if (second) {
            for (int k = 1; k <= 4; ++k) offsets.push_back(sign * k * h2);
        }
    }

    std::vector<RealVector> spectra(offsets.size());
    std::vector<int> ranks(offsets.size());
    parallel_for(offsets.size(), [&](std::size_t j) {
        const ComplexMatrix a = family.eval(t + offsets[j]);
        spectra[j] = hermitian_eig(a, family.tolerances()).eigenvalues;
        const RealVector& v = spectra[j];
        int inside = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (gamma.clearance(v(i)) < options.separation_margin * gamma.radius) {
                throw NumericalError(Failure::BoxTooLarge,
                                     "eigenvalue " + format_t(v(i)) + " reaches the contour at t=" +
                                         format_t(t + offsets[j]) +
                                         "; the probe window leaves the isolating box");
            }
            if (gamma.encloses(v(i))) {
                if (i < lo || i > hi) {
                    throw NumericalError(Failure::BoxTooLarge,
                                         "eigenvalue " + std::to_string(i) +
                                             " enters the cluster contour at t=" +
                                             format_t(t + offsets[j]));
                }
                ++inside;
            }
        }
        if (inside != size) {
            throw NumericalError(Failure::BoxTooLarge,
                                 "cluster leaves its contour at t=" + format_t(t + offsets[j]));
        }
        ranks[j] = projector_rank(riesz_projector(a, gamma, options));
    });
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        if (ranks[j] != size) {
            throw NumericalError(Failure::RankDrift,
                                 "projector rank " + std::to_string(ranks[j]) + " at t=" +
                                     format_t(t + offsets[j]) + ", expected " +
                                     std::to_string(size));
        }
    }

    const double center = spectra[0].segment(lo, size).mean();
    StencilResult out;
    std::size_t next = 1;
    for (int side = 0; side < 2; ++side) {
        if ((side == 0 && !left) || (side == 1 && !right)) continue;
        const Side which = side == 0 ? Side::Left : Side::Right;
        const std::size_t first_base = next;
        next += 4;
        const std::size_t second_base = next;
        if (second) next += 4;
        for (int p = 0; p < size; ++p) {
            double f[5] = {center, 0, 0, 0, 0};
            for (int k = 1; k <= 4; ++k) f[k] = spectra[first_base + k - 1](lo + p);
            out.first[side].push_back(stencil_first(f, h1, which));
            if (second) {
                for (int k = 1; k <= 4; ++k) f[k] = spectra[second_base + k - 1](lo + p);
                out.second[side].push_back(stencil_second(f, h2));
            }
        }
    }
    return out;
}

struct ClusterEvent {
    int lo = 0, hi = 0;
    Contour contour;
    std::vector<double> compressed;
    MatchReport match;
    bool matched = false;
};

struct Point {
    double t = 0.0;
    bool on_grid = false;
    RealVector values;
    RealVector left_slopes;
    RealVector right_slopes;
    std::vector<ClusterEvent> events;
};

class Tracker {
public:
    Tracker(const HermitianFamily& family, const TrackerOptions& options)
        : family_(family), options_(options) {}

    BranchSet run(const RealVector& grid)
    {
        const auto g = static_cast<std::size_t>(grid.size());
        std::vector<Sample> samples(g);
        parallel_for(g, [&](std::size_t k) { samples[k] = sample(family_, grid(static_cast<Eigen::Index>(k))); });

        scale_ = 0.0;
        for (const auto& s : samples) scale_ = std::max(scale_, s.values.cwiseAbs().maxCoeff());
        if (scale_ == 0.0) scale_ = 1.0;
        tol_ = options_.cluster_tol * scale_;

        std::vector<Point> points(g);
        for (std::size_t k = 0; k < g; ++k) {
            points[k] = make_point(grid(static_cast<Eigen::Index>(k)), std::move(samples[k]),
                                   k > 0, k + 1 < g);
            points[k].on_grid = true;
        }

        const Eigen::Index n = family_.dimension();
        BranchSet out;
        out.grid = grid;
        out.prefactor = family_.prefactor();
        out.order = options_.order;
        out.values.resize(grid.size(), n);
        out.derivs.resize(grid.size(), n);

        std::vector<int> pos(static_cast<std::size_t>(n));
        std::iota(pos.begin(), pos.end(), 0);
        for (Eigen::Index j = 0; j < n; ++j) {
            out.values(0, j) = points[0].values(j);
            out.derivs(0, j) = points[0].right_slopes(j);
        }
        for (std::size_t k = 1; k < g; ++k) {
            advance(points[k - 1], points[k], pos, 0, out.crossings);
            const auto row = static_cast<Eigen::Index>(k);
            RealVector left(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                const int p = pos[static_cast<std::size_t>(j)];
                out.values(row, j) = points[k].values(p);
                left(j) = points[k].left_slopes(p);
            }
            if (k + 1 == g) {
                out.derivs.row(row) = left.transpose();
                break;
            }
            apply_events(points[k], pos, out.crossings);
            for (Eigen::Index j = 0; j < n; ++j) {
                const int p = pos[static_cast<std::size_t>(j)];
                out.derivs(row, j) = 0.5 * (left(j) + points[k].right_slopes(p));
            }
        }
        return out;
    }

private:
    Point make_point(double t, Sample s, bool has_left, bool has_right)
    {
        Point pt;
        pt.t = t;
        pt.values = std::move(s.values);
        pt.left_slopes = s.slopes;
        pt.right_slopes = s.slopes;
        for (const auto& [lo, hi] : clusters(pt.values, tol_)) {
            ClusterEvent ev;
            ev.lo = lo;
            ev.hi = hi;
            ev.contour = isolating_contour(pt.values, lo, hi, t);
            const bool second = options_.order == 2;
            const StencilResult st = probe_cluster(family_, t, lo, hi, ev.contour, has_left,
                                                   has_right, second, options_.contour);
            ev.compressed = compressed_from_projector(
                family_, t, riesz_projector(family_.eval(t), ev.contour, options_.contour));
            for (int p = 0; p <= hi - lo; ++p) {
                if (has_left) pt.left_slopes(lo + p) = st.first[0][static_cast<std::size_t>(p)];
                if (has_right) pt.right_slopes(lo + p) = st.first[1][static_cast<std::size_t>(p)];
            }
            if (!has_left) pt.left_slopes.segment(lo, hi - lo + 1) = pt.right_slopes.segment(lo, hi - lo + 1);
            if (!has_right) pt.right_slopes.segment(lo, hi - lo + 1) = pt.left_slopes.segment(lo, hi - lo + 1);
            if (has_left && has_right) {
                ev.match = match_crossing(st.first[0], st.first[1], options_.order, st.second[0],
                                          st.second[1], options_.deriv_tie_tol);
                ev.match.t = t;
                ev.matched = true;
            }
            pt.events.push_back(std::move(ev));
        }
        return pt;
    }

    Contour isolating_contour(const RealVector& values, int lo, int hi, double t) const
    {
        const double center = values.segment(lo, hi - lo + 1).mean();
        double outside = infinity;
        if (lo > 0) outside = std::min(outside, center - values(lo - 1));
        if (hi + 1 < values.size()) outside = std::min(outside, values(hi + 1) - center);
        Contour gamma;
        gamma.center = center;
        gamma.nodes = 64;
        if (std::isfinite(outside)) {
            gamma.radius = 0.5 * outside;
        } else {
            // Nothing outside: any radius comfortably above the probe spread isolates.
            const double h = family_.steps().second * std::max(1.0, std::abs(t));
            RealVector lo_v = eigenvalues_at(family_, t - 4 * h);
            RealVector hi_v = eigenvalues_at(family_, t + 4 * h);
            const double spread = std::max((lo_v.array() - center).abs().maxCoeff(),
                                           (hi_v.array() - center).abs().maxCoeff());
            gamma.radius = std::max(4.0 * spread, 1e-3 * scale_);
        }
        return gamma;
    }

    void apply_events(const Point& pt, std::vector<int>& pos, std::vector<Crossing>& crossings) const
    {
        for (const auto& ev : pt.events) {
            if (!ev.matched) continue;
            Crossing c;
            c.t = pt.t;
            c.on_grid = pt.on_grid;
            c.contour = ev.contour;
            c.rank = ev.hi - ev.lo + 1;
            c.compressed = ev.compressed;
            c.match = ev.match;
            c.branches.assign(static_cast<std::size_t>(c.rank), -1);
            for (int p = ev.lo; p <= ev.hi; ++p) c.positions.push_back(p);
            std::vector<int> next = pos;
            for (std::size_t j = 0; j < pos.size(); ++j) {
                const int p = pos[j];
                if (p < ev.lo || p > ev.hi) continue;
                c.branches[static_cast<std::size_t>(p - ev.lo)] = static_cast<int>(j);
                next[j] = ev.lo + ev.match.pairing[static_cast<std::size_t>(p - ev.lo)];
            }
            pos = std::move(next);
            crossings.push_back(std::move(c));
        }
    }

    bool degenerate_pair(const Point& pt, int i) const
    {
        return pt.values(i + 1) - pt.values(i) <= tol_;
    }

    double tie_guard() const
    {
        const double dim = static_cast<double>(family_.dimension());
        return 1e3 * family_.tolerances().eig * std::sqrt(dim) * scale_;
    }

    // Golden-section search for the smallest gap i..i+1 on [lo, hi], from eigenvalues only.
    std::pair<double, double> golden_minimum(int i, double lo, double hi) const
    {
        auto gap_at = [&](double t) {
            const RealVector v = eigenvalues_at(family_, t);
            return v(i + 1) - v(i);
        };
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
        double f1 = gap_at(x1), f2 = gap_at(x2);
        while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo))) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - r * (hi - lo);
                f1 = gap_at(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + r * (hi - lo);
                f2 = gap_at(x2);
            }
        }
        return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    }

    // Bisection on the sign of the gap slope; returns (t*, gap at t*).
    std::pair<double, double> locate_minimum(int i, const Point& a, const Point& b) const
    {
        double lo = a.t, hi = b.t;
        double g_lo = a.values(i + 1) - a.values(i), g_hi = b.values(i + 1) - b.values(i);
        double d_lo = a.right_slopes(i + 1) - a.right_slopes(i);
        double d_hi = b.left_slopes(i + 1) - b.left_slopes(i);
        double best_t = g_lo < g_hi ? lo : hi, best_gap = std::min(g_lo, g_hi);
        for (int iter = 0; iter < 200; ++iter) {
            const double width = hi - lo;
            if (width <= 1e-14 * std::max(1.0, std::abs(lo))) break;
            // Both ends stay far above the tolerance even at twice the steepest end slope.
            if (std::min(g_lo, g_hi) - 2.0 * std::max(std::abs(d_lo), std::abs(d_hi)) * width > tol_) {
                break;
            }
            const double mid = 0.5 * (lo + hi);
            const Sample s = sample(family_, mid);
            const double gap = s.values(i + 1) - s.values(i);
            if (gap < best_gap) {
                best_gap = gap;
                best_t = mid;
            }
            if (gap <= 64.0 * std::numeric_limits<double>::epsilon() * scale_) break;
            // Below the eigensolver's tie threshold the two eigenvectors mix freely and their
            // Rayleigh slopes stop pointing anywhere; the gap values themselves stay accurate.
            if (gap <= tie_guard()) {
                const auto [t_gs, g_gs] = golden_minimum(i, lo, hi);
                if (g_gs < best_gap) {
                    best_gap = g_gs;
                    best_t = t_gs;
                }
                break;
            }
            const double slope = s.slopes(i + 1) - s.slopes(i);
            if (slope < 0.0) {
                lo = mid;
                g_lo = gap;
                d_lo = slope;
            } else {
                hi = mid;
                g_hi = gap;
                d_hi = slope;
            }
        }
        return {best_t, best_gap};
    }

    void advance(const Point& a, const Point& b, std::vector<int>& pos, int depth,
                 std::vector<Crossing>& crossings)
    {
        const int n = static_cast<int>(a.values.size());
        double crossing_t = infinity;
        for (int i = 0; i + 1 < n; ++i) {
            if (degenerate_pair(a, i) || degenerate_pair(b, i)) continue;
            const double d_a = a.right_slopes(i + 1) - a.right_slopes(i);
            const double d_b = b.left_slopes(i + 1) - b.left_slopes(i);
            if (!(d_a < 0.0 && d_b > 0.0)) continue;
            const auto [t_star, gap] = locate_minimum(i, a, b);
            if (gap <= tol_ && t_star > a.t && t_star < b.t) crossing_t = std::min(crossing_t, t_star);
        }
        if (std::isfinite(crossing_t)) {
            const Point e = make_point(crossing_t, sample(family_, crossing_t), true, true);
            advance(a, e, pos, depth, crossings);
            apply_events(e, pos, crossings);
            advance(e, b, pos, depth, crossings);
            return;
        }

        if (step_is_consistent(a, b)) return;
        if (depth >= options_.max_subdivision) {
            throw NumericalError(Failure::GapCollapse,
                                 "gap collapse unresolved between t=" + format_t(a.t) +
                                     " and t=" + format_t(b.t) +
                                     "; refine the grid");
        }
        const double mid = 0.5 * (a.t + b.t);
        const Point m = make_point(mid, sample(family_, mid), true, true);
        advance(a, m, pos, depth + 1, crossings);
        apply_events(m, pos, crossings);
        advance(m, b, pos, depth + 1, crossings);
    }

    // Trapezoid prediction of every sorted position must land closer to its own eigenvalue
    // than half the distance to any other (non-coincident) one.
    bool step_is_consistent(const Point& a, const Point& b) const
    {
        const Eigen::Index n = a.values.size();
        const double h = b.t - a.t;
        for (Eigen::Index p = 0; p < n; ++p) {
            const double predicted = a.values(p) + 0.5 * h * (a.right_slopes(p) + b.left_slopes(p));
            const double error = std::abs(b.values(p) - predicted);
            double nearest = infinity;
            for (Eigen::Index q = 0; q < n; ++q) {
                const double d = std::abs(b.values(q) - b.values(p));
                if (q != p && d > tol_) nearest = std::min(nearest, d);
            }
            if (error > 0.5 * nearest) return false;
        }
        return true;
    }

    const HermitianFamily& family_;
    TrackerOptions options_;
    double scale_ = 1.0;
    double tol_ = 0.0;
};

} // namespace

MatchReport match_crossing(const std::vector<double>& left, const std::vector<double>& right,
                           int order, const std::vector<double>& second_left,
                           const std::vector<double>& second_right, double tie_tol)
{
    const std::size_t n = left.size();
    if (right.size() != n) {
        throw std::invalid_argument("match_crossing: left has " + std::to_string(n) +
                                    " derivatives, right has " + std::to_string(right.size()));
    }
    if (order != 1 && order != 2) throw std::invalid_argument("match_crossing: order must be 1 or 2");
    if (order == 2 && (second_left.size() != n || second_right.size() != n)) {
        throw std::invalid_argument("match_crossing: order 2 needs second derivatives on both sides");
    }

    std::vector<int> l(n), r(n);
    std::iota(l.begin(), l.end(), 0);
    std::iota(r.begin(), r.end(), 0);
    std::stable_sort(l.begin(), l.end(), [&](int x, int y) { return left[x] < left[y]; });
    std::stable_sort(r.begin(), r.end(), [&](int x, int y) { return right[x] < right[y]; });

    auto tied = [&](const std::vector<double>& d, int x, int y) {
        return std::abs(d[y] - d[x]) <= tie_tol * (1.0 + std::abs(d[x]));
    };

    MatchReport report;
    report.order = order;
    report.left = left;
    report.right = right;
    report.second_left = second_left;
    report.second_right = second_right;
    report.pairing.assign(n, -1);
    for (std::size_t begin = 0; begin < n;) {
        std::size_t end = begin + 1;
        while (end < n && (tied(left, l[end - 1], l[end]) || tied(right, r[end - 1], r[end]))) ++end;
        std::vector<int> lg(l.begin() + static_cast<std::ptrdiff_t>(begin),
                            l.begin() + static_cast<std::ptrdiff_t>(end));
        std::vector<int> rg(r.begin() + static_cast<std::ptrdiff_t>(begin),
                            r.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(lg.begin(), lg.end());
        std::sort(rg.begin(), rg.end());
        if (order == 2) {
            std::stable_sort(lg.begin(), lg.end(),
                             [&](int x, int y) { return second_left[x] < second_left[y]; });
            std::stable_sort(rg.begin(), rg.end(),
                             [&](int x, int y) { return second_right[x] < second_right[y]; });
        }
        for (std::size_t k = 0; k < lg.size(); ++k) report.pairing[static_cast<std::size_t>(lg[k])] = rg[k];
        begin = end;
    }
    for (std::size_t p = 0; p < n; ++p) {
        const auto q = static_cast<std::size_t>(report.pairing[p]);
        report.residual = std::max(report.residual, std::abs(left[p] - right[q]));
        report.sorted_residual = std::max(report.sorted_residual, std::abs(left[p] - right[p]));
    }
    return report;
}

double rayleigh_derivative(const HermitianFamily& family, double t, const ComplexVector& w)
{
    if (w.size() != family.dimension()) {
        throw std::invalid_argument("rayleigh_derivative: vector length does not match dimension");
    }
    if (std::abs(w.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("rayleigh_derivative: vector is not normalized");
    }
    const ComplexMatrix a = family.eval(t);
    const ComplexVector aw = a * w;
    const Complex lambda = w.dot(aw);
    const double bound = family.tolerances().eig * std::max(1.0, a.norm());
    if ((aw - lambda * w).norm() > bound) {
        throw NumericalError(Failure::NotEigenvector,
                             "residual " + std::to_string((aw - lambda * w).norm()) + " at t=" +
                                 format_t(t));
    }
    const Complex rho = w.dot(family.derivative(t) * w);
    if (std::abs(rho.imag()) > 1e-10 * std::max(1.0, std::abs(rho))) {
        throw std::invalid_argument("rayleigh_derivative: derivative is not Hermitian");
    }
    return rho.real();
}

std::vector<double> compressed_derivatives(const HermitianFamily& family, double t,
                                           const Contour& gamma, const ContourOptions& options)
{
    return compressed_from_projector(family, t, riesz_projector(family, t, gamma, options));
}

std::vector<double> one_sided_derivatives(const HermitianFamily& family, double t,
                                          const Contour& gamma, Side side,
                                          const ContourOptions& options)
{
    const RealVector values = eigenvalues_at(family, t);
    check_separation(gamma, values, options.separation_margin);
    int lo = -1, hi = -1;
    for (int i = 0; i < values.size(); ++i) {
        if (!gamma.encloses(values(i))) continue;
        if (lo < 0) lo = i;
        hi = i;
    }
    if (lo < 0) return {};
    const StencilResult st = probe_cluster(family, t, lo, hi, gamma, side == Side::Left,
                                           side == Side::Right, false, options);
    return st.first[side == Side::Left ? 0 : 1];
}

RealVector uniform_grid(double t0, double t1, Eigen::Index size)
{
    if (!(t0 < t1)) {
        throw std::invalid_argument("t_range must satisfy t0 < t1 (got " + format_t(t0) + ", " +
                                    format_t(t1) + ")");
    }
    if (size < 2) throw std::invalid_argument("grid_size must be at least 2");
    RealVector grid(size);
    for (Eigen::Index k = 0; k < size; ++k) {
        grid(k) = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(size - 1);
    }
    grid(size - 1) = t1;
    return grid;
}

BranchSet track_branches(const HermitianFamily& family, const RealVector& grid,
                         const TrackerOptions& options)
{
    if (grid.size() < 2) throw std::invalid_argument("track_branches: need at least 2 grid points");
    for (Eigen::Index k = 1; k < grid.size(); ++k) {
        if (!(grid(k) > grid(k - 1))) {
            throw std::invalid_argument("track_branches: grid must be strictly increasing");
        }
    }
    if (options.order != 1 && options.order != 2) {
        throw std::invalid_argument("track_branches: order must be 1 or 2");
    }
    return Tracker(family, options).run(grid);
}

BranchSet track_branches(const HermitianFamily& family, double t0, double t1,
                         Eigen::Index grid_size, const TrackerOptions& options)
{
    return track_branches(family, uniform_grid(t0, t1, grid_size), options);
}

BranchSet sorted_arrangement(const HermitianFamily& family, const RealVector& grid)
{
    const auto g = static_cast<std::size_t>(grid.size());
    std::vector<Sample> samples(g);
    parallel_for(g, [&](std::size_t k) { samples[k] = sample(family, grid(static_cast<Eigen::Index>(k))); });
    BranchSet out;
    out.grid = grid;
    out.prefactor = family.prefactor();
    out.values.resize(grid.size(), family.dimension());
    out.derivs.resize(grid.size(), family.dimension());
    for (std::size_t k = 0; k < g; ++k) {
        out.values.row(static_cast<Eigen::Index>(k)) = samples[k].values.transpose();
        out.derivs.row(static_cast<Eigen::Index>(k)) = samples[k].slopes.transpose();
    }
    return out;
}

} // namespace specbranch
