#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specbranch/gallery.hpp"
#include "support/oracles.hpp"

using namespace specbranch;

TEST_CASE("curve-lemma windows")
{
    for (int n = 2; n <= 30; ++n) {
        const double right_edge = curve_lemma_center(n) + curve_lemma_halfwidth(n);
        const double next_left = curve_lemma_center(n + 1) - curve_lemma_halfwidth(n + 1);
        CHECK(right_edge < next_left);
        CHECK(curve_lemma_scale(n) <= curve_lemma_halfwidth(n));
    }
    CHECK(curve_lemma_scale(1) == 1.0);
    CHECK(curve_lemma_center(1) == 4.0);
    CHECK_THROWS_AS(curve_lemma_scale(0), std::invalid_argument);
    CHECK_THROWS_AS(curve_lemma_prefactor(32), std::invalid_argument);
    CHECK_THROWS_AS(curve_lemma_family(1), std::invalid_argument);
}

TEST_CASE("the glued family equals A_n inside window n")
{
    const HermitianFamily glued = curve_lemma_family(6);
    for (int n = 2; n <= 6; ++n) {
        const HermitianFamily window = curve_lemma_window(n);
        const double w = curve_lemma_halfwidth(n);
        for (double frac : {-1.0, -0.5, -1e-3, 0.0, 0.25, 1.0}) {
            // the glued family sees t - t_n, which carries the rounding of t
            const double t = curve_lemma_center(n) + frac * w;
            const ComplexMatrix expected = window.physical(t - curve_lemma_center(n));
            const ComplexMatrix got = glued.eval(t);
            CHECK((got - expected).norm() <= 1e-15 * expected.norm());
        }
    }
    // A(t_n) = 2^{-n²} diag(1, -1)
    const ComplexMatrix at_center = glued.eval(curve_lemma_center(3));
    CHECK(at_center(0, 0) == Complex(std::ldexp(1.0, -9)));
    CHECK(at_center(1, 1) == Complex(-std::ldexp(1.0, -9)));
    CHECK(at_center(0, 1) == Complex(0.0));
}

TEST_CASE("tracked window eigenvalues follow ±2^{-n²}√(1+(s/s_n)²)")
{
    for (int n : {2, 5, 9, 14, 20}) {
        const BranchSet b = track_branches(curve_lemma_unit_window(n), -1.0, 1.0, 41);
        REQUIRE(b.prefactor == curve_lemma_prefactor(n));
        const RealMatrix physical = b.physical_values();
        for (Eigen::Index k = 0; k < b.grid.size(); ++k) {
            const double u = b.grid(k);
            const double expected = curve_lemma_prefactor(n) * std::sqrt(1.0 + u * u);
            CHECK(std::abs(physical(k, 1) - expected) <= 1e-10 * expected);
            CHECK(std::abs(physical(k, 0) + expected) <= 1e-10 * expected);
        }
        // bounded second differences: |d²/du² √(1+u²)| ≤ 1
        const double h = b.grid(1) - b.grid(0);
        for (Eigen::Index k = 1; k + 1 < b.grid.size(); ++k) {
            const double second = (b.values(k + 1, 1) - 2 * b.values(k, 1) + b.values(k - 1, 1)) / (h * h);
            CHECK(std::abs(second) <= 1.0 + 1e-6);
        }
    }
}

TEST_CASE("Hölder quotients")
{
    struct Case {
        int n;
        double alpha;
        double value;
    };
    for (const Case& c : {Case{6, 0.25, 2.0}, Case{5, 0.25, 0.7071067812}, Case{3, 1.0, 5.6568542495},
                          Case{9, 0.25, 362.038672}}) {
        const HolderQuotient q = holder_quotient(c.n, c.alpha);
        CHECK(q.closed_form == doctest::Approx(c.value).epsilon(1e-9));
        CHECK(q.relative_difference <= 1e-6);
        CHECK(std::abs(q.numerical - q.closed_form) <= 1e-6 * q.closed_form);
        CHECK(std::abs(q.analytic - q.closed_form) <= 1e-12 * q.closed_form);
    }
    // tracked directly in physical units while 2^{-n²} is still comfortably normal
    for (int n : {3, 6, 10}) {
        const HolderQuotient scaled = holder_quotient(n, 0.5, true);
        const HolderQuotient direct = holder_quotient(n, 0.5, false);
        CHECK(std::abs(direct.numerical - scaled.numerical) <= 1e-6 * scaled.numerical);
    }
    try {
        holder_quotient(16, 0.5, false);
        FAIL("expected an underflow refusal");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == Failure::Underflow);
    }
    CHECK_THROWS_AS(holder_quotient(5, 0.0), std::invalid_argument);

    // strictly increasing once α(n - 1) > 1
    double previous = 0.0;
    for (int n = 6; n <= 14; ++n) {
        const double q = holder_quotient(n, 0.25).numerical;
        CHECK(q > previous);
        previous = q;
    }
}

TEST_CASE("eigenvector jump")
{
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(eigenvector_jump(n) - M_PI / 8) <= 1e-10);
    CHECK(eigenvector_jump(1) == eigenvector_jump(2));
    ComplexMatrix a(2, 2);
    a << 1, 0.3, 0.3, -2;
    CHECK(eigenvector_jump(a, a) <= 1e-12);
    ComplexMatrix b(2, 2);
    b << 1, 1, 1, -1;
    CHECK(std::abs(eigenvector_jump(ComplexMatrix(RealVector::Unit(2, 0).cast<Complex>().asDiagonal()),
                                    b) -
                   M_PI / 8) <= 1e-12);
}

TEST_CASE("bump and resolvent example")
{
    const Bump bump = standard_bump();
    CHECK(bump.value(0.0) == 0.0);
    CHECK(bump.derivative(0.0) == 0.0);
    CHECK(bump.value(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bump.value(2.5) == 0.0);
    CHECK(bump.value(-0.5) == 0.0);
    for (double s = 0.05; s < 2.0; s += 0.05) CHECK(bump.value(s) > 0.0);

    const HermitianFamily f = resolvent_example_family(8);
    const ComplexMatrix a0 = f.eval(0.0);
    for (int k = 1; k <= 8; ++k) CHECK(a0(k - 1, k - 1) == Complex(k));
    // B(t) = A(t) C: entries 1 + λ_1(kt)/k within [1, 1 + 1/k]
    for (double t : {0.1, 0.3, 0.9}) {
        const ComplexMatrix a = f.eval(t);
        for (int k = 1; k <= 8; ++k) {
            const double b = a(k - 1, k - 1).real() / k;
            CHECK(b >= 1.0);
            CHECK(b <= 1.0 + 1.0 / k + 1e-15);
        }
    }

    for (int n = 2; n <= 30; ++n) CHECK(resolvent_weak_vs_norm(40, 1.0 / n).norm_quotient >= 1.0 - 1e-12);
    double previous = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 20; ++j) {
        const double p = resolvent_weak_vs_norm(40, std::ldexp(1.0, -j)).pointwise_max;
        CHECK(p <= previous);
        previous = p;
    }
    CHECK(previous <= 1e-3);

    const Bump zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
    const ResolventQuotient q = resolvent_weak_vs_norm(10, 0.3, 5, zero);
    CHECK(q.pointwise_max == 0.0);
    CHECK(q.norm_quotient == 0.0);
    CHECK_THROWS_AS(resolvent_weak_vs_norm(10, 0.0), std::invalid_argument);
}

TEST_CASE("Schrödinger family")
{
    const int m = 99;
    const double h = 1.0 / (m + 1);
    const RealVector lambda = hermitian_eig(schrodinger_family("0", m).eval(0.0)).eigenvalues;
    for (int k = 1; k <= m; ++k) {
        const double exact = 2.0 / (h * h) * (1.0 - std::cos(k * M_PI * h));
        CHECK(std::abs(lambda(k - 1) - exact) <= 1e-9 * exact);
    }
    CHECK(std::abs(lambda(0) - M_PI * M_PI) <= 1e-3 * M_PI * M_PI);

    SUBCASE("constant shift moves every branch with slope 1")
    {
        const BranchSet b = schrodinger_track("t", 20, 0.0, 1.0, 11);
        CHECK(b.crossings.empty());
        CHECK((b.derivs.array() - 1.0).abs().maxCoeff() <= 1e-6);
    }
    SUBCASE("slopes of t·x against first-order perturbation")
    {
        const HermitianFamily f = schrodinger_family("t*x", 30);
        const BranchSet b = schrodinger_track("t*x", 30, -0.5, 0.5, 11);
        const ComplexMatrix v = oracle::eigenvectors(f.eval(0.0));
        const double hx = 1.0 / 31;
        for (Eigen::Index i = 0; i < 30; ++i) {
            double expected = 0.0;
            for (Eigen::Index r = 0; r < 30; ++r) expected += (r + 1) * hx * std::norm(v(r, i));
            CHECK(std::abs(b.derivs(5, i) - expected) <= 1e-6);
        }
    }
    CHECK_THROWS_AS(schrodinger_family("0", 2), std::invalid_argument);
    CHECK_THROWS_AS(schrodinger_family("i*x", 5).eval(0.0), std::invalid_argument);
    CHECK_THROWS_AS(schrodinger_family("y", 5), std::invalid_argument);
}
