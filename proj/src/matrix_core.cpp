#include "specbranch/matrix_core.hpp"

namespace specbranch {

const char* to_string(Failure kind) noexcept
{
    switch (kind) {
    case Failure::ContourTouchesSpectrum: return "contour touches spectrum";
    case Failure::QuadratureNotConverged: return "quadrature not converged";
    case Failure::RankDrift: return "rank drift";
    case Failure::BoxTooLarge: return "box too large";
    case Failure::GapCollapse: return "gap collapse unresolved";
    case Failure::NotConverged: return "eigensolver not converged";
    case Failure::RootsNotReal: return "roots not real to tolerance";
    case Failure::NotEigenvector: return "vector is not an eigenvector";
    case Failure::Underflow: return "underflow";
    }
    return "numerical failure";
}

} // namespace specbranch
