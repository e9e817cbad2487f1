#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbranch/matrix_core.hpp"
#include "support/oracles.hpp"

using namespace specbranch;

TEST_CASE("hermitian_eig on small matrices")
{
    SUBCASE("zero matrix")
    {
        const auto d = hermitian_eig(ComplexMatrix::Zero(2, 2));
        CHECK(d.eigenvalues(0) == 0.0);
        CHECK(d.eigenvalues(1) == 0.0);
    }
    SUBCASE("first gallery window at its center")
    {
        ComplexMatrix a(2, 2);
        a << 0.5, 0.0, 0.0, -0.5;
        const auto d = hermitian_eig(a);
        CHECK(d.eigenvalues(0) == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(d.eigenvalues(1) == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("[[2,1],[1,2]]")
    {
        RealMatrix a(2, 2);
        a << 2, 1, 1, 2;
        const auto d = hermitian_eig(a);
        CHECK(d.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));
        // (1,-1)/√2 and (1,1)/√2, first component made positive
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(d.eigenvectors(0, 0) == doctest::Approx(r).epsilon(1e-14));
        CHECK(d.eigenvectors(1, 0) == doctest::Approx(-r).epsilon(1e-14));
        CHECK(d.eigenvectors(0, 1) == doctest::Approx(r).epsilon(1e-14));
        CHECK(d.eigenvectors(1, 1) == doctest::Approx(r).epsilon(1e-14));
    }
}

TEST_CASE("hermitian_eig rejects bad input")
{
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
    ComplexMatrix a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(hermitian_eig(a), std::invalid_argument);
    Tolerances no_sweeps;
    no_sweeps.max_sweeps = 0;
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(hermitian_eig(oracle::random_hermitian(4, rng), no_sweeps), NumericalError);
}

TEST_CASE("hermitian_eig against Eigen on random matrices")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index m = 1 + trial % 16;
        const ComplexMatrix a = oracle::random_hermitian(m, rng);
        const auto d = hermitian_eig(a);
        const double scale = std::max(1.0, a.norm());
        CHECK((d.eigenvectors * d.eigenvalues.cast<Complex>().asDiagonal() *
                   d.eigenvectors.adjoint() -
               a)
                  .norm() <= 1e-10 * scale);
        CHECK((d.eigenvectors.adjoint() * d.eigenvectors - ComplexMatrix::Identity(m, m))
                  .norm() <= 1e-10);
        CHECK((a * d.eigenvectors - d.eigenvectors * d.eigenvalues.cast<Complex>().asDiagonal())
                  .norm() <= 1e-10 * scale);
        for (Eigen::Index i = 1; i < m; ++i) CHECK(d.eigenvalues(i - 1) <= d.eigenvalues(i));
        CHECK((d.eigenvalues - oracle::eigenvalues(a)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("eigenvalues are invariant under unitary conjugation")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index m = 2 + trial % 9;
        const ComplexMatrix a = oracle::random_hermitian(m, rng);
        const ComplexMatrix u = oracle::random_unitary(m, rng);
        const ComplexMatrix b = u * a * u.adjoint();
        const RealVector la = hermitian_eig(a).eigenvalues;
        const RealVector lb = hermitian_eig((b + b.adjoint()) * 0.5).eigenvalues;
        CHECK((la - lb).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("degenerate eigenvalues get a deterministic basis")
{
    std::mt19937_64 rng(3);
    const ComplexMatrix u = oracle::random_unitary(4, rng);
    RealVector lambda(4);
    lambda << 1, 1, 1, 2;
    const ComplexMatrix a = oracle::with_spectrum(u, lambda);
    const auto first = hermitian_eig(a);
    const auto second = hermitian_eig(a);
    CHECK(first.eigenvectors == second.eigenvectors);
    for (Eigen::Index j = 0; j < 4; ++j) {
        const Eigen::Index lead = detail::first_significant(first.eigenvectors, j);
        REQUIRE(lead < 4);
        CHECK(std::abs(first.eigenvectors(lead, j).imag()) <= 1e-15);
        CHECK(first.eigenvectors(lead, j).real() > 0.0);
    }
}

TEST_CASE("tiny-scale spectra keep their order")
{
    ComplexMatrix a(2, 2);
    a << std::ldexp(1.0, -100), 0.0, 0.0, -std::ldexp(1.0, -100);
    const auto d = hermitian_eig(a);
    CHECK(d.eigenvalues(0) == -std::ldexp(1.0, -100));
    CHECK(d.eigenvalues(1) == std::ldexp(1.0, -100));
}

TEST_CASE("solve_shifted")
{
    SUBCASE("diagonal inversion")
    {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a.diagonal() << 1, 2;
        const ComplexMatrix x = solve_shifted(a, 0.0, ComplexMatrix::Identity(2, 2));
        CHECK(std::abs(x(0, 0) - 1.0) <= 1e-15);
        CHECK(std::abs(x(1, 1) - 0.5) <= 1e-15);
        CHECK(std::abs(x(0, 1)) == 0.0);
    }
    SUBCASE("shift between eigenvalues")
    {
        ComplexMatrix a = ComplexMatrix::Zero(3, 3);
        a.diagonal() << 1, 2, 5;
        const ComplexMatrix x = solve_shifted(a, 1.5, ComplexMatrix::Identity(3, 3));
        CHECK(std::abs(x(0, 0) + 2.0) <= 1e-14);
        CHECK(std::abs(x(1, 1) - 2.0) <= 1e-14);
        CHECK(std::abs(x(2, 2) - 1.0 / 3.5) <= 1e-14);
    }
    SUBCASE("shift on the spectrum")
    {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a.diagonal() << 1, 2;
        try {
            solve_shifted(a, 1.0, ComplexMatrix::Identity(2, 2));
            FAIL("expected a failure");
        } catch (const NumericalError& e) {
            CHECK(e.kind() == Failure::ContourTouchesSpectrum);
        }
    }
    SUBCASE("random shifts away from the spectrum")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        int tried = 0;
        while (tried < 30) {
            const ComplexMatrix a = oracle::random_hermitian(6, rng);
            const Complex z(u(rng), u(rng) * 1e-3);
            const RealVector lambda = oracle::eigenvalues(a);
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < 6; ++i) dist = std::min(dist, std::abs(z - lambda(i)));
            if (dist < 1e-6 * operator_norm(a)) continue;
            ++tried;
            const ComplexMatrix b = oracle::gaussian(6, 2, rng);
            const ComplexMatrix x = solve_shifted(a, z, b);
            const ComplexMatrix shifted = a - z * ComplexMatrix::Identity(6, 6);
            CHECK((shifted * x - b).norm() <= 1e-10 * b.norm());
        }
    }
}

TEST_CASE("numerical_rank")
{
    ComplexMatrix p = ComplexMatrix::Zero(3, 3);
    p.diagonal() << 1, 1, 0;
    CHECK(numerical_rank(p, 0.5) == 2);
    CHECK(numerical_rank(ComplexMatrix::Zero(3, 3), 0.5) == 0);
    CHECK_THROWS_AS(numerical_rank(p, 0.0), std::invalid_argument);

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index m = 2 + trial % 8;
        const ComplexMatrix u = oracle::random_unitary(m, rng);
        RealVector ind = RealVector::Zero(m);
        const Eigen::Index k = trial % (m + 1);
        ind.head(k).setOnes();
        const ComplexMatrix proj = oracle::with_spectrum(u, ind);
        REQUIRE((proj * proj - proj).norm() <= 1e-8);
        CHECK(numerical_rank(proj, 0.5) == std::lround(proj.trace().real()));
    }
}

TEST_CASE("operator_norm")
{
    CHECK(operator_norm(ComplexMatrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-15));
    RealMatrix d = RealMatrix::Zero(2, 2);
    d.diagonal() << 3, -4;
    CHECK(operator_norm(d) == doctest::Approx(4.0).epsilon(1e-15));
    RealMatrix jordan(2, 2);
    jordan << 0, 1, 0, 0;
    CHECK(operator_norm(jordan) == doctest::Approx(1.0).epsilon(1e-15));
}
