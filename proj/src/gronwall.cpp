#include "specbranch/parallel.hpp"
#include "specbranch/tracker.hpp"

namespace specbranch {

GronwallReport gronwall_screen(const RealVector& grid, const RealMatrix& values, double a)
{
    if (values.rows() != grid.size()) {
        throw std::invalid_argument("gronwall_screen: values need one row per grid point");
    }
    if (!(a >= 0.0)) throw std::invalid_argument("gronwall_screen: a must be non-negative");
    GronwallReport report;
    report.a = a;
    report.min_margin = std::numeric_limits<double>::infinity();
    const Eigen::Index g = grid.size();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i1 = 0; i1 < g; ++i1) {
            for (Eigen::Index i2 = 0; i2 < g; ++i2) {
                if (i1 == i2) continue;
                const double lhs = std::abs(values(i1, j) - values(i2, j));
                const double rhs = (1.0 + std::abs(values(i2, j))) *
                                   std::expm1(a * std::abs(grid(i1) - grid(i2)));
                ++report.checked;
                report.min_margin = std::min(report.min_margin, rhs - lhs);
                if (lhs <= rhs) continue;
                ++report.violation_count;
                if (report.violations.size() < 100) report.violations.push_back({j, i1, i2, lhs, rhs});
            }
        }
    }
    if (report.checked == 0) report.min_margin = 0.0;
    return report;
}

double gronwall_constant(const HermitianFamily& family, const RealVector& grid)
{
    std::vector<double> norms(static_cast<std::size_t>(grid.size()));
    parallel_for(norms.size(), [&](std::size_t k) {
        norms[k] = graph_operator_norm(family, grid(static_cast<Eigen::Index>(k)));
    });
    double c = 0.0;
    for (double v : norms) c = std::max(c, v);
    return c;
}

} // namespace specbranch
