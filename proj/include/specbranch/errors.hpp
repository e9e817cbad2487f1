#pragma once

#include <stdexcept>
#include <string>

namespace specbranch {

// Numerical failure classes surfaced to callers (the CLI maps all of them to exit code 3).
enum class Failure {
    ContourTouchesSpectrum,
    QuadratureNotConverged,
    RankDrift,
    BoxTooLarge,
    GapCollapse,
    NotConverged,
    RootsNotReal,
    NotEigenvector,
    Underflow,
};

const char* to_string(Failure kind) noexcept;

class NumericalError : public std::runtime_error {
public:
    NumericalError(Failure kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    Failure kind() const noexcept { return kind_; }

private:
    Failure kind_;
};

// Malformed configuration text (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace specbranch
