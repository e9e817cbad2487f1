#include <sstream>

#include "specbranch/tracker.hpp"

namespace specbranch {

BranchSet extend_parameterization(const BranchSet& lambda, const RealMatrix& mu_values,
                                  const RealMatrix& mu_derivs, int order, double tol)
{
    const Eigen::Index g = lambda.grid.size();
    const Eigen::Index n = lambda.branch_count();
    const Eigen::Index k = mu_values.cols();
    if (lambda.values.rows() != g || lambda.derivs.rows() != g || lambda.derivs.cols() != n) {
        throw std::invalid_argument("extend_parameterization: malformed branch set");
    }
    if (mu_values.rows() != g || k > n) {
        throw std::invalid_argument("extend_parameterization: need one row per grid point and at "
                                    "most " + std::to_string(n) + " given branches");
    }
    if (mu_derivs.rows() != g || mu_derivs.cols() != k) {
        throw std::invalid_argument("extend_parameterization: derivative shape mismatch");
    }
    if (order != 1 && order != 2) throw std::invalid_argument("extend_parameterization: order must be 1 or 2");
    if (!(tol > 0.0)) throw std::invalid_argument("extend_parameterization: tol must be positive");

    const Eigen::Index rest = n - k;
    BranchSet out;
    out.grid = lambda.grid;
    out.prefactor = lambda.prefactor;
    out.order = order;
    out.values.resize(g, rest);
    out.derivs.resize(g, rest);

    std::vector<Eigen::Index> attached(static_cast<std::size_t>(k), -1);
    std::vector<Eigen::Index> completion(static_cast<std::size_t>(rest), -1);
    for (Eigen::Index row = 0; row < g; ++row) {
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        auto close = [&](Eigen::Index i, Eigen::Index j) {
            return std::abs(lambda.values(row, i) - mu_values(row, j)) <= tol;
        };
        for (Eigen::Index j = 0; j < k; ++j) {
            const Eigen::Index i = attached[static_cast<std::size_t>(j)];
            if (i >= 0 && !used[static_cast<std::size_t>(i)] && close(i, j)) {
                used[static_cast<std::size_t>(i)] = true;
            } else {
                attached[static_cast<std::size_t>(j)] = -1;
            }
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            if (attached[static_cast<std::size_t>(j)] >= 0) continue;
            Eigen::Index best = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (used[static_cast<std::size_t>(i)] || !close(i, j)) continue;
                if (best < 0) {
                    best = i;
                    continue;
                }
                const double ds = std::abs(lambda.derivs(row, i) - mu_derivs(row, j));
                const double db = std::abs(lambda.derivs(row, best) - mu_derivs(row, j));
                const double vs = std::abs(lambda.values(row, i) - mu_values(row, j));
                const double vb = std::abs(lambda.values(row, best) - mu_values(row, j));
                if (ds < db || (ds == db && vs < vb)) best = i;
            }
            if (best < 0) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "counting condition violated at t=" << lambda.grid(row)
                    << ", z=" << mu_values(row, j)
                    << ": more given branches than eigenvalues there";
                throw std::invalid_argument(msg.str());
            }
            attached[static_cast<std::size_t>(j)] = best;
            used[static_cast<std::size_t>(best)] = true;
        }

        std::vector<Eigen::Index> orphans;
        for (Eigen::Index r = 0; r < rest; ++r) {
            const Eigen::Index i = completion[static_cast<std::size_t>(r)];
            if (i >= 0 && !used[static_cast<std::size_t>(i)]) {
                used[static_cast<std::size_t>(i)] = true;
            } else {
                orphans.push_back(r);
            }
        }
        for (Eigen::Index r : orphans) {
            const Eigen::Index prev = completion[static_cast<std::size_t>(r)];
            Eigen::Index best = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (used[static_cast<std::size_t>(i)]) continue;
                if (best < 0 || prev < 0) {
                    if (best < 0) best = i;
                    continue;
                }
                const double v_prev = out.values(row - 1, r), s_prev = out.derivs(row - 1, r);
                const double vi = std::abs(lambda.values(row, i) - v_prev);
                const double vb = std::abs(lambda.values(row, best) - v_prev);
                const double si = std::abs(lambda.derivs(row, i) - s_prev);
                const double sb = std::abs(lambda.derivs(row, best) - s_prev);
                if (vi < vb - tol || (std::abs(vi - vb) <= tol && si < sb)) best = i;
            }
            completion[static_cast<std::size_t>(r)] = best;
            used[static_cast<std::size_t>(best)] = true;
        }
        for (Eigen::Index r = 0; r < rest; ++r) {
            const Eigen::Index i = completion[static_cast<std::size_t>(r)];
            out.values(row, r) = lambda.values(row, i);
            out.derivs(row, r) = lambda.derivs(row, i);
        }
    }
    return out;
}

} // namespace specbranch
