#include "specbranch/run.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "specbranch/contour.hpp"
#include "specbranch/errors.hpp"
#include "specbranch/gallery.hpp"

namespace specbranch {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_branch_csv(std::ostream& out, const BranchSet& branches, bool with_derivs)
{
    const Eigen::Index n = branches.branch_count();
    out << "t";
    for (Eigen::Index j = 0; j < n; ++j) out << ",branch_" << j;
    if (with_derivs) {
        for (Eigen::Index j = 0; j < n; ++j) out << ",dbranch_" << j;
    }
    out << '\n';
    for (Eigen::Index k = 0; k < branches.grid.size(); ++k) {
        out << format_double(branches.grid(k));
        for (Eigen::Index j = 0; j < n; ++j) {
            out << ',' << format_double(branches.prefactor * branches.values(k, j));
        }
        if (with_derivs) {
            for (Eigen::Index j = 0; j < n; ++j) {
                out << ',' << format_double(branches.prefactor * branches.derivs(k, j));
            }
        }
        out << '\n';
    }
}

HermitianFamily build_family(const RunConfig& config)
{
    const FamilyConfig& f = config.family;
    const std::string name = f.name.empty() && config.command == "schrodinger" ? "schrodinger" : f.name;
    auto make = [&]() -> HermitianFamily {
        if (name == "expr") return make_expression_family({f.dimension, f.entries});
        if (name == "curve-lemma") return curve_lemma_family(f.n_max);
        if (name == "resolvent-example") return resolvent_example_family(f.m ? f.m : 20);
        if (name == "schrodinger") return schrodinger_family(f.potential, f.m ? f.m : 99);
        throw ConfigError("unknown family '" + name + "'");
    };
    HermitianFamily family = make();
    const ToleranceConfig& t = config.tolerances;
    Tolerances tol;
    tol.hermitian = t.hermitian;
    tol.eig = t.eig;
    tol.solve = t.solve;
    family.set_tolerances(tol);
    family.set_steps({t.fd_first, t.fd_second});
    return family;
}

std::pair<double, double> resolve_t_range(const RunConfig& config)
{
    if (config.grid.t_range) return *config.grid.t_range;
    if (config.family.name == "curve-lemma") {
        const int n = config.family.n_max;
        return {curve_lemma_center(2) - curve_lemma_halfwidth(2),
                curve_lemma_center(n) + curve_lemma_halfwidth(n)};
    }
    return {0.0, 1.0};
}

TrackerOptions tracker_options(const RunConfig& config)
{
    TrackerOptions options;
    options.order = config.grid.order;
    options.cluster_tol = config.tolerances.cluster;
    options.deriv_tol = config.tolerances.derivative;
    options.deriv_tie_tol = config.tolerances.derivative_tie;
    options.contour.proj_tol = config.tolerances.projector;
    options.contour.tol.hermitian = config.tolerances.hermitian;
    options.contour.tol.eig = config.tolerances.eig;
    options.contour.tol.solve = config.tolerances.solve;
    return options;
}

namespace {

std::string list(const std::vector<double>& values, double scale = 1.0)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_double(scale * values[i]);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_plots(const fs::path& dir, const BranchSet& branches)
{
    fs::create_directories(dir / "plot");
    for (Eigen::Index j = 0; j < branches.branch_count(); ++j) {
        std::ostringstream out;
        for (Eigen::Index k = 0; k < branches.grid.size(); ++k) {
            out << format_double(branches.grid(k)) << ' '
                << format_double(branches.prefactor * branches.values(k, j)) << '\n';
        }
        write_file(dir / "plot" / ("branch_" + std::to_string(j) + ".dat"), out.str());
    }
}

void describe_crossings(std::ostream& report, const BranchSet& branches, double deriv_tol,
                        std::vector<std::string>& warnings)
{
    report << "crossings: " << branches.crossings.size() << '\n';
    const double scale = branches.prefactor;
    for (std::size_t i = 0; i < branches.crossings.size(); ++i) {
        const Crossing& c = branches.crossings[i];
        report << "  crossing " << i << " at t=" << format_double(c.t)
               << (c.on_grid ? " (grid point)" : " (located between grid points)") << '\n';
        report << "    positions " << c.positions.front() << ".." << c.positions.back()
               << ", branches";
        for (int b : c.branches) report << ' ' << b;
        report << ", contour center " << format_double(scale * c.contour.center.real())
               << " radius " << format_double(scale * c.contour.radius) << '\n';
        report << "    pairing";
        for (std::size_t p = 0; p < c.match.pairing.size(); ++p) {
            report << ' ' << p << "->" << c.match.pairing[p];
        }
        report << ", order " << c.match.order << '\n';
        report << "    left derivatives: " << list(c.match.left, scale) << '\n';
        report << "    right derivatives: " << list(c.match.right, scale) << '\n';
        if (!c.match.second_left.empty()) {
            report << "    left second derivatives: " << list(c.match.second_left, scale) << '\n';
            report << "    right second derivatives: " << list(c.match.second_right, scale) << '\n';
        }
        report << "    compressed P A' P: " << list(c.compressed, scale) << '\n';
        report << "    residual " << format_double(scale * c.match.residual)
               << " (sorted arrangement " << format_double(scale * c.match.sorted_residual)
               << ")\n";
        if (scale * c.match.residual > deriv_tol) {
            warnings.push_back("crossing at t=" + format_double(c.t) + " has residual " +
                               format_double(scale * c.match.residual) +
                               " above the derivative tolerance");
        }
    }
}

void describe_gronwall(std::ostream& report, const GronwallReport& g)
{
    report << "gronwall: a=" << format_double(g.a) << ", pairs checked " << g.checked
           << ", violations " << g.violation_count << ", min margin "
           << format_double(g.min_margin) << '\n';
    for (const auto& v : g.violations) {
        report << "  branch " << v.branch << " grid " << v.i1 << " vs " << v.i2 << ": "
               << format_double(v.lhs) << " > " << format_double(v.rhs) << '\n';
    }
}

void finish(std::ostream& report, const std::vector<std::string>& warnings)
{
    if (warnings.empty()) {
        report << "warnings: none\n";
        return;
    }
    report << "warnings: " << warnings.size() << '\n';
    for (const auto& w : warnings) report << "  " << w << '\n';
}

std::string run_track(const RunConfig& config, const fs::path& dir, std::ostream* log)
{
    const HermitianFamily family = build_family(config);
    const auto [t0, t1] = resolve_t_range(config);
    const RealVector grid = uniform_grid(t0, t1, config.grid.grid_size);
    const TrackerOptions options = tracker_options(config);
    if (log) *log << "tracking " << family.name() << " on " << grid.size() << " points\n";
    const BranchSet branches = track_branches(family, grid, options);
    if (log) *log << "gronwall screen\n";
    const double a = 1.01 * gronwall_constant(family, grid);
    const GronwallReport gronwall =
        gronwall_screen(grid, branches.physical_values(), a);

    std::ostringstream csv;
    write_branch_csv(csv, branches);
    write_file(dir / "branches.csv", csv.str());
    write_plots(dir, branches);

    std::ostringstream report;
    std::vector<std::string> warnings;
    report << "command: " << config.command << '\n';
    report << "family: " << family.name() << " (dimension " << family.dimension() << ")\n";
    for (const auto& [key, value] : family.params) report << "  " << key << " = " << value << '\n';
    report << "grid: " << grid.size() << " points on [" << format_double(t0) << ", "
           << format_double(t1) << "], order " << options.order << '\n';
    report << "branches: " << branches.branch_count() << '\n';
    describe_crossings(report, branches, options.deriv_tol, warnings);
    describe_gronwall(report, gronwall);
    if (!gronwall.holds()) warnings.push_back("gronwall screen reported violations");
    finish(report, warnings);
    return report.str();
}

std::string run_project(const RunConfig& config, const fs::path& dir)
{
    if (!config.contour.center || !config.contour.radius) {
        throw ConfigError("command 'project' needs [contour] center and radius");
    }
    const HermitianFamily family = build_family(config);
    const double t = config.contour.t ? *config.contour.t : resolve_t_range(config).first;
    Contour gamma;
    gamma.center = *config.contour.center / family.prefactor();
    gamma.radius = *config.contour.radius / family.prefactor();
    gamma.nodes = config.contour.nodes;
    ContourOptions options = tracker_options(config).contour;
    const SpectralCluster cluster = spectral_cluster(family, t, gamma, options);

    const ComplexMatrix& p = cluster.projector;
    const double scale = family.prefactor();
    std::ostringstream csv;
    csv << "index,eigenvalue\n";
    for (std::size_t i = 0; i < cluster.eigenvalues.size(); ++i) {
        csv << i << ',' << format_double(scale * cluster.eigenvalues[i]) << '\n';
    }
    write_file(dir / "cluster.csv", csv.str());

    std::ostringstream report;
    report << "command: project\n";
    report << "family: " << family.name() << " (dimension " << family.dimension() << ")\n";
    report << "t: " << format_double(t) << '\n';
    report << "contour: center " << format_double(*config.contour.center) << " radius "
           << format_double(*config.contour.radius) << ", nodes used " << cluster.nodes << '\n';
    report << "rank: " << cluster.rank << '\n';
    report << "idempotency defect: " << format_double((p * p - p).norm()) << '\n';
    report << "hermitian defect: " << format_double((p - p.adjoint()).norm()) << '\n';
    report << "newton sums (unit scale): " << list(cluster.newton_sums) << '\n';
    report << "sigma (unit scale): " << list(cluster.sigma) << '\n';
    report << "eigenvalues: " << list(cluster.eigenvalues, scale) << '\n';
    finish(report, {});
    return report.str();
}

std::string run_holder(const RunConfig& config, const fs::path& dir)
{
    std::ostringstream csv, report;
    csv << "n,alpha,closed_form,numerical,analytic,relative_difference\n";
    report << "command: counterexample-holder\n";
    std::vector<std::string> warnings;
    for (int n : config.holder.n) {
        const HolderQuotient q = holder_quotient(n, config.holder.alpha, config.holder.prefactor);
        csv << n << ',' << format_double(q.alpha) << ',' << format_double(q.closed_form) << ','
            << format_double(q.numerical) << ',' << format_double(q.analytic) << ','
            << format_double(q.relative_difference) << '\n';
        char line[256];
        std::snprintf(line, sizeof line,
                      "n=%d alpha=%.17g: closed-form %.10g, numerical %.10g (relative difference "
                      "%.3g)\n",
                      n, q.alpha, q.closed_form, q.numerical, q.relative_difference);
        report << line;
        if (q.relative_difference > 1e-6) {
            warnings.push_back("n=" + std::to_string(n) + " differs from the closed form by " +
                               format_double(q.relative_difference));
        }
    }
    write_file(dir / "holder.csv", csv.str());
    finish(report, warnings);
    return report.str();
}

std::string run_resolvent(const RunConfig& config, const fs::path& dir)
{
    std::vector<double> ts = config.resolvent.t;
    if (ts.empty()) {
        for (int n = 2; n <= 50; ++n) ts.push_back(1.0 / n);
        for (int j = 1; j <= 20; ++j) ts.push_back(std::ldexp(1.0, -j));
    }
    std::ostringstream csv, report;
    csv << "t,pointwise_max,norm_quotient\n";
    report << "command: counterexample-resolvent\n";
    report << "m: " << config.resolvent.m << ", K: " << config.resolvent.K << '\n';
    for (double t : ts) {
        const ResolventQuotient q = resolvent_weak_vs_norm(config.resolvent.m, t, config.resolvent.K);
        csv << format_double(t) << ',' << format_double(q.pointwise_max) << ','
            << format_double(q.norm_quotient) << '\n';
        report << "t=" << format_double(t) << ": pointwise max " << format_double(q.pointwise_max)
               << ", norm quotient " << format_double(q.norm_quotient) << '\n';
    }
    write_file(dir / "resolvent.csv", csv.str());
    finish(report, {});
    return report.str();
}

std::string run_extend(const RunConfig& config, const fs::path& dir)
{
    const HermitianFamily family = build_family(config);
    const auto [t0, t1] = resolve_t_range(config);
    const RealVector grid = uniform_grid(t0, t1, config.grid.grid_size);
    const BranchSet lambda = track_branches(family, grid, tracker_options(config));

    const auto k = static_cast<Eigen::Index>(config.extend.given.size());
    RealMatrix mu(grid.size(), k), dmu(grid.size(), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Expression e = parse_expression(config.extend.given[static_cast<std::size_t>(j)]);
        for (Eigen::Index row = 0; row < grid.size(); ++row) {
            const double t = grid(row);
            const double h = config.tolerances.fd_first * std::max(1.0, std::abs(t));
            mu(row, j) = e.evaluate(t).real() / family.prefactor();
            dmu(row, j) = (e.evaluate(t + h).real() - e.evaluate(t - h).real()) / (2.0 * h) /
                          family.prefactor();
        }
    }
    const BranchSet completion = extend_parameterization(lambda, mu, dmu, config.grid.order,
                                                         config.extend.tolerance / family.prefactor());

    double worst = 0.0;
    for (Eigen::Index row = 0; row < grid.size(); ++row) {
        std::vector<double> joined, reference;
        for (Eigen::Index j = 0; j < k; ++j) joined.push_back(mu(row, j));
        for (Eigen::Index j = 0; j < completion.branch_count(); ++j) joined.push_back(completion.values(row, j));
        for (Eigen::Index j = 0; j < lambda.branch_count(); ++j) reference.push_back(lambda.values(row, j));
        std::sort(joined.begin(), joined.end());
        std::sort(reference.begin(), reference.end());
        for (std::size_t i = 0; i < joined.size(); ++i) {
            worst = std::max(worst, std::abs(joined[i] - reference[i]));
        }
    }

    std::ostringstream csv;
    write_branch_csv(csv, completion);
    write_file(dir / "branches.csv", csv.str());
    write_plots(dir, completion);

    std::ostringstream report;
    report << "command: extend\n";
    report << "family: " << family.name() << " (dimension " << family.dimension() << ")\n";
    report << "given branches: " << k << ", completions: " << completion.branch_count() << '\n';
    report << "counting check: max multiset deviation "
           << format_double(family.prefactor() * worst) << '\n';
    std::vector<std::string> warnings;
    if (family.prefactor() * worst > config.extend.tolerance) {
        warnings.push_back("union of given and completed branches misses the eigenvalue multiset");
    }
    finish(report, warnings);
    return report.str();
}

} // namespace

std::string run(const RunConfig& config, const fs::path& out_dir, std::ostream* log)
{
    validate(config);
    fs::create_directories(out_dir);
    std::string report;
    if (config.command == "track" || config.command == "schrodinger") {
        report = run_track(config, out_dir, log);
    } else if (config.command == "project") {
        report = run_project(config, out_dir);
    } else if (config.command == "counterexample-holder") {
        report = run_holder(config, out_dir);
    } else if (config.command == "counterexample-resolvent") {
        report = run_resolvent(config, out_dir);
    } else {
        report = run_extend(config, out_dir);
    }
    write_file(out_dir / "report.txt", report);
    return report;
}

} // namespace specbranch
