#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specbranch {

struct FamilyConfig {
    std::string name;  // expr | curve-lemma | resolvent-example | schrodinger
    int dimension = 0;
    std::vector<std::string> entries;
    int n_max = 4;
    int m = 0;  // 0: family default (resolvent-example 20, schrodinger 99)
    std::string potential = "0";

    bool operator==(const FamilyConfig&) const = default;
};

struct GridConfig {
    std::optional<std::pair<double, double>> t_range;  // unset: family default
    int grid_size = 101;
    int order = 1;

    bool operator==(const GridConfig&) const = default;
};

struct ContourConfig {
    std::optional<double> center;  // unset: cluster derived from the spectrum at t
    std::optional<double> radius;
    int nodes = 64;
    std::optional<double> t;  // evaluation point for `project`; unset: t0

    bool operator==(const ContourConfig&) const = default;
};

struct ToleranceConfig {
    double hermitian = 1e-10;
    double eig = 1e-10;
    double solve = 1e-10;
    double projector = 1e-10;
    double cluster = 1e-6;
    double derivative = 1e-6;
    double derivative_tie = 1e-5;
    double fd_first = 1e-5;
    double fd_second = 1e-4;

    bool operator==(const ToleranceConfig&) const = default;
};

struct HolderConfig {
    std::vector<int> n{3, 5, 6, 9};
    double alpha = 0.25;
    bool prefactor = true;

    bool operator==(const HolderConfig&) const = default;
};

struct ResolventConfig {
    int m = 200;
    int K = 5;
    std::vector<double> t;  // empty: t = 1/n (n = 2..50) and t = 2^{-j} (j = 1..20)

    bool operator==(const ResolventConfig&) const = default;
};

struct ExtendConfig {
    std::vector<std::string> given;  // expressions in t
    double tolerance = 1e-8;

    bool operator==(const ExtendConfig&) const = default;
};

struct RunConfig {
    std::string command = "track";
    std::uint64_t seed = 0;
    std::string output = "out";
    FamilyConfig family;
    GridConfig grid;
    ContourConfig contour;
    ToleranceConfig tolerances;
    HolderConfig holder;
    ResolventConfig resolvent;
    ExtendConfig extend;

    bool operator==(const RunConfig&) const = default;
};

/*
 * Line-oriented format:
 *
 *   command = track
 *   [family]
 *   name = expr
 *   dimension = 2
 *   entries = 0, t, 0        # upper triangle, row-major
 *   [grid]
 *   t_range = -1, 1
 *
 * `#` and `;` start comments. Unknown sections or keys, duplicates and malformed values are
 * ConfigErrors naming the line.
 */
RunConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

// Range and consistency checks (also run by parse_config). Throws ConfigError.
void validate(const RunConfig& config);

} // namespace specbranch
