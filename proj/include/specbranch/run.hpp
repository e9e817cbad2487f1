#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>

#include "specbranch/config.hpp"
#include "specbranch/family.hpp"
#include "specbranch/tracker.hpp"

namespace specbranch {

// %.17g: shortest text that round-trips every double through strtod.
std::string format_double(double v);

// "t,branch_0,...[,dbranch_0,...]" with physical (prefactor-scaled) values, LF endings.
void write_branch_csv(std::ostream& out, const BranchSet& branches, bool with_derivs = true);

HermitianFamily build_family(const RunConfig& config);
std::pair<double, double> resolve_t_range(const RunConfig& config);
TrackerOptions tracker_options(const RunConfig& config);

/// Executes config.command and writes its artifacts into `out_dir` (created if needed):
/// branches.csv and plot/branch_<j>.dat for tracking commands, holder.csv, resolvent.csv or
/// cluster.csv otherwise, and report.txt always. Returns the report text. Errors propagate as
/// ConfigError / std::invalid_argument (bad input) or NumericalError.
std::string run(const RunConfig& config, const std::filesystem::path& out_dir,
                std::ostream* log = nullptr);

} // namespace specbranch
